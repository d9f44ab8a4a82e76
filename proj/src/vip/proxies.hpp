#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "codec/transaction.hpp"
#include "link/hvl_link.hpp"
#include "uvm/analysis.hpp"
#include "uvm/component.hpp"
#include "uvm/sequencer.hpp"
#include "vip/records.hpp"

namespace coemu::vip {

/// What the binding registry hands a proxy: the link and the port(s) of
/// its BFM. Video agents use `aux_port` for the pixel-word stream.
struct BfmHandle {
  link::Link* link = nullptr;
  std::uint16_t port = 0;
  std::uint16_t aux_port = 0;
};

// Registry keys used for proxy <-> BFM binding.
inline constexpr const char* kDriverBfmKey = "driver_bfm_if";
inline constexpr const char* kMonitorBfmKey = "monitor_bfm_if";
inline constexpr const char* kVideoInBfmKey = "video_in_bfm_if";
inline constexpr const char* kVideoOutBfmKey = "video_out_bfm_if";
inline constexpr const char* kIrqBfmKey = "irq_bfm_if";

using RegSequencer = uvm::Sequencer<codec::RegPacket>;

/// Driver proxy: sequence item -> packed struct -> remote drive task.
class RegDriverProxy : public uvm::Component {
 public:
  RegDriverProxy(std::string name, uvm::Component& parent);

  void connect_to(RegSequencer& sequencer) { sequencer_ = &sequencer; }

  void build_phase() override;
  void connect_phase() override;
  void run_phase() override;

  /// One get_next_item / drive / item_done round.
  void drive_one();

  static codec::RegPacket from_class_to_struct(const codec::RegPacket& item);

  uvm::AnalysisPort<codec::RegPacket> responses;

 private:
  void drive(const codec::RegPacket& item);

  RegSequencer* sequencer_ = nullptr;
  BfmHandle bfm_;
};

/// Monitor proxy: unpacks streamed records and broadcasts them.
class RegMonitorProxy : public uvm::Component {
 public:
  RegMonitorProxy(std::string name, uvm::Component& parent);

  void build_phase() override;
  void connect_phase() override;
  void poll();

  std::uint64_t observed() const noexcept { return observed_; }
  std::uint64_t protocol_errors() const noexcept { return protocol_errors_; }

  uvm::AnalysisPort<MonitorRecord> ap;

 private:
  BfmHandle bfm_;
  std::uint64_t observed_ = 0;
  std::uint64_t protocol_errors_ = 0;
};

class RegAgent : public uvm::Component {
 public:
  RegAgent(std::string name, uvm::Component& parent);

  RegSequencer& sequencer() { return *sequencer_; }
  RegDriverProxy& driver() { return *driver_; }
  RegMonitorProxy& monitor() { return *monitor_; }

 private:
  RegSequencer* sequencer_;
  RegDriverProxy* driver_;
  RegMonitorProxy* monitor_;
};

class VideoDriverProxy : public uvm::Component {
 public:
  VideoDriverProxy(std::string name, uvm::Component& parent);
  void build_phase() override;

  /// Streams the frame header and its pixel words; returns immediately.
  void send_frame(const codec::FrameTxn& frame);
  std::uint64_t frames_sent() const noexcept { return frames_sent_; }

 private:
  BfmHandle bfm_;
  std::uint64_t frames_sent_ = 0;
};

class VideoMonitorProxy : public uvm::Component {
 public:
  VideoMonitorProxy(std::string name, uvm::Component& parent);
  void build_phase() override;
  void connect_phase() override;
  void poll();

  /// Frames completed since the last call.
  std::vector<codec::FrameTxn> collect_frames();
  /// Reports a frame integrity error for any partial frame or stray words.
  void check_drained();
  std::uint64_t integrity_errors() const noexcept { return integrity_errors_; }

  uvm::AnalysisPort<codec::FrameTxn> ap;

 private:
  BfmHandle bfm_;
  std::optional<codec::PackedBits> header_;
  std::vector<codec::PackedBits> words_;
  std::vector<codec::FrameTxn> ready_;
  std::uint64_t integrity_errors_ = 0;
};

class IrqMonitorProxy : public uvm::Component {
 public:
  IrqMonitorProxy(std::string name, uvm::Component& parent);
  void build_phase() override;
  void connect_phase() override;
  void poll();

  std::uint64_t pulses() const noexcept { return cycles_.size(); }
  const std::vector<std::uint64_t>& pulse_cycles() const noexcept { return cycles_; }

 private:
  BfmHandle bfm_;
  std::vector<std::uint64_t> cycles_;
};

class VideoAgent : public uvm::Component {
 public:
  VideoAgent(std::string name, uvm::Component& parent, bool has_input = true, bool has_output = true);
  /// Either half may be absent (nullptr) when the interface has no input or output side.
  VideoDriverProxy* driver() { return driver_; }
  VideoMonitorProxy* monitor() { return monitor_; }

 private:
  VideoDriverProxy* driver_ = nullptr;
  VideoMonitorProxy* monitor_ = nullptr;
};

}  // namespace coemu::vip
