#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "codec/transaction.hpp"
#include "dut/isp_regs.hpp"
#include "hdl/buses.hpp"
#include "hdl/kernel.hpp"

namespace coemu::dut {

/// Slave side of the register bus protocol: accepts a one-cycle request
/// pulse, answers with a one-cycle r_req pulse `latency` cycles after the
/// request became visible.
class BusSlave {
 public:
  struct Access {
    bool respond = true;
    std::uint32_t data = 0;
    codec::ResponseOpcode opc = codec::ResponseOpcode::kOk;
  };
  /// Performs the access at request-accept time (may schedule signal writes).
  using Handler = std::function<Access(hdl::Kernel&, const codec::RegPacket&)>;

  BusSlave(hdl::RegBusPins pins, std::uint32_t latency, Handler handler);

  void eval(hdl::Kernel& k);
  /// Fault injection: drive one response pulse with no request on `cycle`.
  void inject_spurious_response(hdl::SimTime cycle) { spurious_at_ = cycle; }

 private:
  hdl::RegBusPins pins_;
  std::uint32_t latency_;
  Handler handler_;
  std::optional<Access> pending_;
  std::uint32_t countdown_ = 0;
  bool driving_ = false;
  std::optional<hdl::SimTime> spurious_at_;
};

/// 256 x 32-bit register file at base + 0x000..0x3FC.
class RegFileDut {
 public:
  RegFileDut(hdl::Kernel& k, const hdl::RegBusPins& pins, const std::string& key, std::uint32_t base,
             std::uint32_t response_latency);

  std::uint32_t word(std::uint32_t index) const { return storage_.at(index); }
  BusSlave& slave() { return slave_; }

 private:
  BusSlave::Access access(const codec::RegPacket& req);

  std::uint32_t base_;
  std::array<std::uint32_t, kRegFileWords> storage_{};
  BusSlave slave_;
};

/// One ISP IP: register signals plus an L-stage pixel pipeline and an irq
/// pulse when an output frame completes.
class IspIpDut {
 public:
  IspIpDut(hdl::Kernel& k, const std::string& name, const hdl::VideoPins& in, const hdl::VideoPins& out,
           std::uint32_t pipeline_latency, const IspConfig& reset_values);

  struct Regs {
    hdl::SignalId enable, gain, offset, clamp_min, clamp_max;
  };
  const Regs& regs() const noexcept { return regs_; }
  hdl::SignalId irq() const noexcept { return irq_; }

  /// The hardware transfer function on committed register values.
  static std::uint16_t transfer(std::uint32_t enable, std::uint32_t gain, std::uint32_t offset,
                                std::uint32_t clamp_min, std::uint32_t clamp_max, std::uint16_t in);

 private:
  struct Stage {
    bool valid = false;
    bool frame_start = false;
    bool line_start = false;
    std::uint16_t data = 0;
  };
  void eval(hdl::Kernel& k);

  hdl::VideoPins in_, out_;
  Regs regs_;
  hdl::SignalId irq_;
  std::vector<Stage> stages_;
};

/// R IPs chained output-to-input behind one register interface.
class IspSubsystemDut {
 public:
  struct Params {
    std::uint32_t chain_length = 1;
    std::uint32_t base = 0;
    std::uint32_t response_latency = 2;
    std::uint32_t pipeline_latency = 4;
    IspConfig reset_values;
  };

  IspSubsystemDut(hdl::Kernel& k, const std::string& name, const hdl::RegBusPins& bus,
                  const hdl::VideoPins& video_in, Params params);

  const hdl::VideoPins& video_out() const noexcept { return stage_pins_.back(); }
  hdl::SignalId irq() const noexcept { return ips_.back()->irq(); }
  std::size_t chain_length() const noexcept { return ips_.size(); }
  const IspIpDut& ip(std::size_t i) const { return *ips_.at(i); }

 private:
  BusSlave::Access access(hdl::Kernel& k, const codec::RegPacket& req);

  Params params_;
  std::vector<hdl::VideoPins> stage_pins_;
  std::vector<std::unique_ptr<IspIpDut>> ips_;
  BusSlave slave_;
};

/// Emulates design size: `gate_factor` units of busywork per cycle with no
/// effect on any signal.
class ComplexityKnob {
 public:
  ComplexityKnob(hdl::Kernel& k, std::uint32_t gate_factor);
  std::uint64_t checksum() const noexcept { return checksum_; }

 private:
  std::uint32_t gate_factor_;
  std::vector<std::uint64_t> scratch_;
  std::uint64_t checksum_ = 0;
};

}  // namespace coemu::dut
