#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "codec/transaction.hpp"
#include "dut/isp_regs.hpp"
#include "link/hvl_link.hpp"
#include "runner/config.hpp"
#include "runner/coverage.hpp"
#include "uvm/component.hpp"
#include "vip/proxies.hpp"
#include "vip/reg_model.hpp"

namespace coemu::runner {

/// Predicts each register transfer from a shadow of the DUT and checks the
/// monitored packet; also cross-checks the driver's returned packets against
/// the monitor's, in order.
class RegScoreboard : public uvm::Component {
 public:
  RegScoreboard(std::string name, uvm::Component& parent, const HdlConfig& hdl, bool isp);

  void observe_monitor(const vip::MonitorRecord& rec);
  void observe_driver(const codec::RegPacket& rsp);
  void report_phase() override;

  std::uint64_t checked() const noexcept { return checked_; }
  std::uint64_t mismatches() const noexcept { return mismatches_; }

  struct Expect {
    std::uint8_t r_req = 1;
    std::uint32_t r_data = 0;
    std::uint8_t r_opc = 0;
  };
  /// Applies `req` to the shadow state and returns the expected response.
  Expect predict(const codec::RegPacket& req);

 private:
  void mismatch(const std::string& what);
  void cross_check();

  bool isp_;
  std::uint32_t base_;
  std::uint32_t chain_length_;
  std::vector<std::uint32_t> shadow_;  // regfile words, or 5 registers per IP
  std::deque<codec::RegPacket> from_monitor_, from_driver_;
  std::uint64_t checked_ = 0;
  std::uint64_t mismatches_ = 0;
};

/// Compares output frames with expected frames in order.
class FrameScoreboard : public uvm::Component {
 public:
  FrameScoreboard(std::string name, uvm::Component& parent) : Component(std::move(name), parent) {}

  void expect(codec::FrameTxn frame) { expected_.push_back(std::move(frame)); }
  void observe(const codec::FrameTxn& actual);
  void report_phase() override;

  std::size_t outstanding() const noexcept { return expected_.size(); }
  std::uint64_t matched() const noexcept { return matched_; }
  std::uint64_t mismatches() const noexcept { return mismatches_; }

 private:
  std::deque<codec::FrameTxn> expected_;
  std::uint64_t matched_ = 0;
  std::uint64_t mismatches_ = 0;
};

class CoverageCollector : public uvm::Component {
 public:
  CoverageCollector(std::string name, uvm::Component& parent) : Component(std::move(name), parent) {}
  CoverageDb db;
};

/// `cycle,R|W,addr,data,be,r_data,r_opc`
std::string txn_log_line(const vip::MonitorRecord& rec);

/// Agents, scoreboards and coverage for one topology.
class VerifEnv : public uvm::Component {
 public:
  VerifEnv(std::string name, uvm::Component& parent, const HdlConfig& hdl);

  void build_phase() override;
  void connect_phase() override;
  void report_phase() override;

  const HdlConfig& hdl() const noexcept { return hdl_; }
  std::size_t reg_agent_count() const noexcept { return reg_agents_.size(); }
  vip::RegAgent& reg_agent(std::size_t e) { return *reg_agents_.at(e); }
  RegScoreboard& reg_scoreboard(std::size_t e) { return *reg_scoreboards_.at(e); }
  std::size_t video_agent_count() const noexcept { return video_agents_.size(); }
  vip::VideoAgent& video_agent(std::size_t m) { return *video_agents_.at(m); }
  std::size_t irq_monitor_count() const noexcept { return irq_monitors_.size(); }
  vip::IrqMonitorProxy& irq_monitor(std::size_t d) { return *irq_monitors_.at(d); }
  FrameScoreboard* frame_scoreboard() noexcept { return frame_scoreboard_; }
  CoverageDb& coverage() { return coverage_->db; }

  const std::vector<std::string>& txn_log() const noexcept { return txn_log_; }
  std::uint64_t monitored_transactions() const;
  std::uint64_t frames_sent() const;

 private:
  HdlConfig hdl_;
  std::vector<vip::RegAgent*> reg_agents_;
  std::vector<RegScoreboard*> reg_scoreboards_;
  std::vector<vip::VideoAgent*> video_agents_;
  std::vector<vip::IrqMonitorProxy*> irq_monitors_;
  FrameScoreboard* frame_scoreboard_ = nullptr;
  CoverageCollector* coverage_ = nullptr;
  std::vector<std::string> txn_log_;
};

/// Component paths of the environment, as used for registry bindings.
inline constexpr const char* kTestTopName = "uvm_test_top";
std::string reg_agent_path(std::uint32_t e);
std::string video_agent_path(std::uint32_t m);
std::string irq_monitor_path(std::uint32_t d);

/// Binds every proxy of the topology to its port on `link`.
void bind_topology(uvm::BindingRegistry& registry, link::Link& link, const HdlConfig& hdl);

class TestTop;
using TestBody = std::function<void(TestTop&)>;

/// Root component: owns the environment and runs a test body in RUN.
class TestTop : public uvm::Component {
 public:
  TestTop(uvm::Context& ctx, const RunConfig& cfg, link::Link& link, TestBody body);

  void build_phase() override;
  void run_phase() override;

  VerifEnv& env() { return *env_; }
  const RunConfig& config() const noexcept { return cfg_; }
  link::Link& link() noexcept { return link_; }
  Prng& prng() noexcept { return prng_; }

  /// Register access through agent `e` as a raw sequence item.
  codec::RegPacket reg_access(std::size_t e, std::uint32_t addr, std::uint32_t data, std::uint8_t be);
  /// Register model over the DUT on agent `e`, bound to that agent's sequencer.
  vip::RegModel make_reg_model(std::size_t e);
  /// Streams a frame on video agent 0 and records its expected output.
  void send_frame(const codec::FrameTxn& frame, const std::vector<dut::IspConfig>& configs);
  /// Advances the clock until every expected frame is back or `budget` cycles pass.
  bool drain_frames(std::uint64_t budget);
  std::uint64_t cycles_advanced() const noexcept { return advanced_; }

  /// Received output frames in arrival order (for dumps).
  const std::vector<codec::FrameTxn>& output_frames() const noexcept { return output_frames_; }

 private:
  RunConfig cfg_;
  link::Link& link_;
  TestBody body_;
  Prng prng_;
  VerifEnv* env_ = nullptr;
  std::uint64_t advanced_ = 0;
  std::uint64_t frame_seq_ = 0;
  std::vector<codec::FrameTxn> output_frames_;
};

/// Built-in test body by name; throws UsageError for unknown names.
TestBody builtin_test(const std::string& name);

/// Current ISP settings of IP `ip` according to the model's mirror.
dut::IspConfig isp_config_from_model(const vip::RegModel& model, std::size_t ip);

/// Cycles to advance per polling step while frames drain.
inline constexpr std::uint64_t kDrainChunk = 64;

}  // namespace coemu::runner
