#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "codec/transaction.hpp"
#include "hdl/buses.hpp"
#include "hdl/kernel.hpp"
#include "link/hdl_endpoint.hpp"
#include "vip/records.hpp"

namespace coemu::vip {

/// Register-bus driver BFM; its drive task is the xtf bound to the agent's
/// reactive port. Request pins are pulsed for exactly one cycle, then the
/// task waits for r_req (up to `timeout` cycles) and returns the completed
/// packet.
class RegDriverBfm final : public link::XtfTask {
 public:
  struct Options {
    std::uint32_t timeout = kDefaultResponseTimeout;
    bool wait_for_reset = true;
  };

  RegDriverBfm(hdl::Kernel& k, const hdl::RegBusPins& pins, const std::string& key, Options options);

  void start(const codec::PackedBits& args) override;
  bool done() const override { return state_ == State::kDone; }
  codec::PackedBits take_result() override;

  std::uint64_t transactions() const noexcept { return transactions_; }

 private:
  enum class State { kIdle, kArmed, kWaiting, kDone };
  void eval(hdl::Kernel& k);
  void sample(const hdl::Kernel& k);

  hdl::RegBusPins pins_;
  Options options_;
  State state_ = State::kIdle;
  codec::RegPacket current_;
  hdl::SimTime req_cycle_ = 0;
  bool driving_ = false;
  std::uint64_t transactions_ = 0;
};

/// Passive register-bus monitor; streams one MonitorRecord per completed
/// request/response pair (or timeout), and one per protocol violation.
class RegMonitorBfm {
 public:
  RegMonitorBfm(hdl::Kernel& k, const hdl::RegBusPins& pins, const std::string& key, link::StreamOut out,
                std::uint32_t timeout = kDefaultResponseTimeout);

 private:
  void sample(const hdl::Kernel& k);

  hdl::RegBusPins pins_;
  link::StreamOut out_;
  std::uint32_t timeout_;
  std::optional<codec::RegPacket> pending_;
  hdl::SimTime req_cycle_ = 0;
};

/// Video input BFM: pops a frame header and its pixel words from the stream
/// queues and drives one pixel per cycle, with one idle cycle after each frame.
class VideoInBfm {
 public:
  VideoInBfm(hdl::Kernel& k, const hdl::VideoPins& pins, const std::string& key, link::StreamInQueue& headers,
             link::StreamInQueue& words);

  std::uint64_t underruns() const noexcept { return underruns_; }

 private:
  void eval(hdl::Kernel& k);
  void idle(hdl::Kernel& k);

  hdl::VideoPins pins_;
  link::StreamInQueue& headers_;
  link::StreamInQueue& words_;
  bool active_ = false;
  bool blank_ = false;
  bool driving_ = false;
  std::uint32_t width_ = 0;
  std::uint32_t total_ = 0;
  std::uint32_t index_ = 0;
  std::uint16_t held_ = 0;
  std::uint64_t underruns_ = 0;
};

/// Video output monitor BFM: rebuilds frames from pins (frame ends when
/// pixel_valid drops) and streams header + pixel words back.
class VideoOutMonitorBfm {
 public:
  VideoOutMonitorBfm(hdl::Kernel& k, const hdl::VideoPins& pins, const std::string& key, link::StreamOut headers,
                     link::StreamOut words);

 private:
  void sample(const hdl::Kernel& k);
  void finish();

  hdl::VideoPins pins_;
  link::StreamOut headers_, words_;
  bool collecting_ = false;
  std::vector<std::uint16_t> pixels_;
  std::uint32_t first_line_ = 0;
  std::uint32_t lines_ = 0;
  std::uint16_t next_id_ = 0;
};

/// Streams the cycle of every irq pulse.
class IrqMonitorBfm {
 public:
  IrqMonitorBfm(hdl::Kernel& k, hdl::SignalId irq, const std::string& key, link::StreamOut out);

 private:
  hdl::SignalId irq_;
  link::StreamOut out_;
};

}  // namespace coemu::vip
