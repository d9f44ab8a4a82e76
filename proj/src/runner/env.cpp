#include "runner/env.hpp"

#include <cstdio>

#include "common/error.hpp"
#include "dut/golden.hpp"
#include "runner/ports.hpp"

namespace coemu::runner {

namespace {

constexpr std::uint8_t kOk = static_cast<std::uint8_t>(codec::ResponseOpcode::kOk);
constexpr std::uint8_t kErr = static_cast<std::uint8_t>(codec::ResponseOpcode::kError);

std::uint32_t byte_merge(std::uint32_t old, std::uint32_t data, std::uint8_t be) {
  std::uint32_t mask = 0;
  for (int b = 0; b < 4; ++b) {
    if (be & (1u << b)) mask |= 0xFFu << (8 * b);
  }
  return (old & ~mask) | (data & mask);
}

std::string hex32(std::uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%08x", v);
  return buf;
}

constexpr std::size_t kIspShadowRegs = 5;  // ENABLE..CLAMP_MAX; VERSION is constant

}  // namespace

// ---------------------------------------------------------------------------

RegScoreboard::RegScoreboard(std::string name, uvm::Component& parent, const HdlConfig& hdl, bool isp)
    : Component(std::move(name), parent), isp_(isp), base_(hdl.reg_base), chain_length_(hdl.env.R) {
  if (!isp_) {
    shadow_.assign(dut::kRegFileWords, 0);
    return;
  }
  for (std::uint32_t i = 0; i < chain_length_; ++i) {
    for (std::size_t r = 0; r < kIspShadowRegs; ++r) {
      shadow_.push_back(dut::isp_reset_value(hdl.isp_reset, dut::kIspRegs[r].offset));
    }
  }
}

RegScoreboard::Expect RegScoreboard::predict(const codec::RegPacket& req) {
  if (req.addr < base_) return isp_ ? Expect{0, 0, kErr} : Expect{1, 0, kErr};
  const std::uint32_t rel = req.addr - base_;
  if (!isp_) {
    if (rel >= dut::kRegFileSpan || rel % 4 != 0) return {1, 0, kErr};
    auto& word = shadow_[rel / 4];
    if (req.is_read()) return {1, word, kOk};
    word = byte_merge(word, req.data, req.be);
    return {1, 0, kOk};
  }
  const std::uint32_t ip = rel / dut::kIpStride;
  if (ip >= chain_length_) return {0, 0, kErr};  // undecoded: the driver times out
  const std::uint32_t offset = rel % dut::kIpStride;
  std::size_t idx = std::size(dut::kIspRegs);
  for (std::size_t r = 0; r < std::size(dut::kIspRegs); ++r) {
    if (dut::kIspRegs[r].offset == offset) idx = r;
  }
  if (idx == std::size(dut::kIspRegs)) return {1, 0, kErr};
  const auto& info = dut::kIspRegs[idx];
  if (req.is_read()) {
    if (info.rw_mask == 0) return {1, dut::kIspVersion, kOk};
    return {1, shadow_[ip * kIspShadowRegs + idx], kOk};
  }
  if (info.rw_mask == 0) return {1, 0, kErr};
  auto& reg = shadow_[ip * kIspShadowRegs + idx];
  reg = byte_merge(reg, req.data, req.be) & info.rw_mask;
  return {1, 0, kOk};
}

void RegScoreboard::mismatch(const std::string& what) {
  ++mismatches_;
  reporter().error("SCOREBOARD", full_path() + ": " + what);
}

void RegScoreboard::observe_monitor(const vip::MonitorRecord& rec) {
  const auto& p = rec.packet;
  const Expect e = predict(p);
  ++checked_;
  if (p.r_req != e.r_req || p.r_data != e.r_data || p.r_opc != e.r_opc) {
    mismatch("cycle " + std::to_string(rec.cycle) + " addr " + hex32(p.addr) + ": got r_req=" +
             std::to_string(p.r_req) + " r_data=" + hex32(p.r_data) + " r_opc=" + std::to_string(p.r_opc) +
             ", expected r_req=" + std::to_string(e.r_req) + " r_data=" + hex32(e.r_data) +
             " r_opc=" + std::to_string(e.r_opc));
  }
  from_monitor_.push_back(p);
  cross_check();
}

void RegScoreboard::observe_driver(const codec::RegPacket& rsp) {
  from_driver_.push_back(rsp);
  cross_check();
}

void RegScoreboard::cross_check() {
  while (!from_monitor_.empty() && !from_driver_.empty()) {
    const auto& m = from_monitor_.front();
    const auto& d = from_driver_.front();
    if (m.addr != d.addr || m.data != d.data || m.be != d.be || m.eop != d.eop || m.r_req != d.r_req ||
        m.r_data != d.r_data || m.r_opc != d.r_opc) {
      mismatch("driver and monitor disagree on transfer to " + hex32(d.addr));
    }
    from_monitor_.pop_front();
    from_driver_.pop_front();
  }
}

void RegScoreboard::report_phase() {
  if (!from_monitor_.empty() || !from_driver_.empty()) {
    mismatch(std::to_string(from_driver_.size()) + " driven and " + std::to_string(from_monitor_.size()) +
             " monitored transfers left unpaired");
  }
}

// ---------------------------------------------------------------------------

void FrameScoreboard::observe(const codec::FrameTxn& actual) {
  if (expected_.empty()) {
    ++mismatches_;
    reporter().error("SCOREBOARD", full_path() + ": unexpected output frame " + std::to_string(actual.frame_id));
    return;
  }
  const auto exp = std::move(expected_.front());
  expected_.pop_front();
  if (actual == exp) {
    ++matched_;
    return;
  }
  ++mismatches_;
  std::string detail;
  if (actual.width != exp.width || actual.height != exp.height) {
    detail = "size " + std::to_string(actual.width) + "x" + std::to_string(actual.height) + ", expected " +
             std::to_string(exp.width) + "x" + std::to_string(exp.height);
  } else if (actual.frame_id != exp.frame_id) {
    detail = "frame id " + std::to_string(actual.frame_id);
  } else {
    std::size_t i = 0;
    while (i < exp.pixels.size() && actual.pixels[i] == exp.pixels[i]) ++i;
    detail = "pixel " + std::to_string(i) + " is " + std::to_string(actual.pixels[i]) + ", expected " +
             std::to_string(exp.pixels[i]);
  }
  reporter().error("SCOREBOARD", full_path() + ": frame " + std::to_string(exp.frame_id) + " mismatch: " + detail);
}

void FrameScoreboard::report_phase() {
  if (!expected_.empty()) {
    mismatches_ += expected_.size();
    reporter().error("SCOREBOARD", full_path() + ": " + std::to_string(expected_.size()) + " frame(s) never came out");
  }
}

// ---------------------------------------------------------------------------

std::string txn_log_line(const vip::MonitorRecord& rec) {
  const auto& p = rec.packet;
  char buf[96];
  std::snprintf(buf, sizeof buf, "%llu,%c,0x%08x,0x%08x,0x%x,0x%08x,%u", static_cast<unsigned long long>(rec.cycle),
                p.is_read() ? 'R' : 'W', p.addr, p.data, static_cast<unsigned>(p.be), p.r_data,
                static_cast<unsigned>(p.r_opc));
  return buf;
}

std::string reg_agent_path(std::uint32_t e) { return std::string(kTestTopName) + ".env.reg_agent" + std::to_string(e); }
std::string video_agent_path(std::uint32_t m) {
  return std::string(kTestTopName) + ".env.video_agent" + std::to_string(m);
}
std::string irq_monitor_path(std::uint32_t d) { return std::string(kTestTopName) + ".env.irq" + std::to_string(d); }

void bind_topology(uvm::BindingRegistry& registry, link::Link& link, const HdlConfig& hdl) {
  const auto& env = hdl.env;
  for (std::uint32_t e = 0; e < env.E; ++e) {
    registry.set(reg_agent_path(e) + ".driver", vip::kDriverBfmKey, vip::BfmHandle{&link, reg_driver_port(e), 0});
    registry.set(reg_agent_path(e) + ".monitor", vip::kMonitorBfmKey, vip::BfmHandle{&link, reg_monitor_port(e), 0});
  }
  for (std::uint32_t m = 0; m < env.M(); ++m) {
    if (m < env.A) {
      registry.set(video_agent_path(m) + ".driver", vip::kVideoInBfmKey,
                   vip::BfmHandle{&link, video_in_header_port(m), video_in_pixel_port(m)});
    }
    if (m < env.C) {
      registry.set(video_agent_path(m) + ".monitor", vip::kVideoOutBfmKey,
                   vip::BfmHandle{&link, video_out_header_port(m), video_out_pixel_port(m)});
    }
  }
  for (std::uint32_t d = 0; d < env.D; ++d) {
    registry.set(irq_monitor_path(d), vip::kIrqBfmKey, vip::BfmHandle{&link, irq_port(d), 0});
  }
}

// ---------------------------------------------------------------------------

VerifEnv::VerifEnv(std::string name, uvm::Component& parent, const HdlConfig& hdl)
    : Component(std::move(name), parent), hdl_(hdl) {}

void VerifEnv::build_phase() {
  const auto& env = hdl_.env;
  for (std::uint32_t e = 0; e < env.E; ++e) {
    reg_agents_.push_back(&create<vip::RegAgent>("reg_agent" + std::to_string(e)));
    const bool isp = hdl_.dut == DutKind::kIsp && e == 0;
    reg_scoreboards_.push_back(&create<RegScoreboard>("reg_scoreboard" + std::to_string(e), hdl_, isp));
  }
  for (std::uint32_t m = 0; m < env.M(); ++m) {
    video_agents_.push_back(&create<vip::VideoAgent>("video_agent" + std::to_string(m), m < env.A, m < env.C));
  }
  for (std::uint32_t d = 0; d < env.D; ++d) {
    irq_monitors_.push_back(&create<vip::IrqMonitorProxy>("irq" + std::to_string(d)));
  }
  if (env.M() > 0) frame_scoreboard_ = &create<FrameScoreboard>("frame_scoreboard");
  coverage_ = &create<CoverageCollector>("coverage");
}

void VerifEnv::connect_phase() {
  for (std::size_t e = 0; e < reg_agents_.size(); ++e) {
    auto* sb = reg_scoreboards_[e];
    reg_agents_[e]->monitor().ap.subscribe([this, sb](const vip::MonitorRecord& rec) {
      sb->observe_monitor(rec);
      coverage_->db.sample(rec.packet);
      txn_log_.push_back(txn_log_line(rec));
    });
    reg_agents_[e]->driver().responses.subscribe([sb](const codec::RegPacket& rsp) { sb->observe_driver(rsp); });
  }
  for (auto* va : video_agents_) {
    if (auto* mon = va->monitor()) {
      mon->ap.subscribe([this](const codec::FrameTxn& f) {
        coverage_->db.sample(f);
        frame_scoreboard_->observe(f);
      });
    }
  }
}

void VerifEnv::report_phase() {
  for (auto* va : video_agents_) {
    if (auto* mon = va->monitor()) mon->check_drained();
  }
  const std::uint64_t frames = frames_sent();
  for (auto* irq : irq_monitors_) {
    if (irq->pulses() != frames) {
      reporter().error("IRQ", irq->full_path() + ": " + std::to_string(irq->pulses()) + " interrupt(s) for " +
                                  std::to_string(frames) + " frame(s)");
    }
  }
  for (auto* agent : reg_agents_) {
    if (agent->monitor().observed() != agent->sequencer().done_count()) {
      reporter().error("MONITOR", agent->full_path() + ": " + std::to_string(agent->monitor().observed()) +
                                      " monitored vs " + std::to_string(agent->sequencer().done_count()) +
                                      " completed items");
    }
  }
}

std::uint64_t VerifEnv::monitored_transactions() const {
  std::uint64_t n = 0;
  for (auto* a : reg_agents_) n += a->monitor().observed();
  return n;
}

std::uint64_t VerifEnv::frames_sent() const {
  std::uint64_t n = 0;
  for (auto* va : video_agents_) {
    if (auto* drv = va->driver()) n += drv->frames_sent();
  }
  return n;
}

// ---------------------------------------------------------------------------

TestTop::TestTop(uvm::Context& ctx, const RunConfig& cfg, link::Link& link, TestBody body)
    : Component(kTestTopName, ctx), cfg_(cfg), link_(link), body_(std::move(body)), prng_(cfg.seed) {}

void TestTop::build_phase() { env_ = &create<VerifEnv>("env", cfg_.hdl); }

void TestTop::run_phase() {
  if (env_->video_agent_count() > 0) {
    if (auto* mon = env_->video_agent(0).monitor()) {
      mon->ap.subscribe([this](const codec::FrameTxn& f) { output_frames_.push_back(f); });
    }
  }
  context().raise_objection();
  try {
    if (body_) body_(*this);
  } catch (...) {
    context().drop_objection();
    throw;
  }
  context().drop_objection();
  context().cycles = link_.shutdown();
  context().transactions = env_->monitored_transactions();
}

codec::RegPacket TestTop::reg_access(std::size_t e, std::uint32_t addr, std::uint32_t data, std::uint8_t be) {
  codec::RegPacket item;
  item.req = 1;
  item.eop = 1;
  item.addr = addr;
  item.data = be ? data : 0;
  item.be = be;
  return env_->reg_agent(e).sequencer().execute(item);
}

vip::RegModel TestTop::make_reg_model(std::size_t e) {
  const auto& h = cfg_.hdl;
  vip::RegModel model = (h.dut == DutKind::kIsp && e == 0) ? vip::RegModel::isp_map(h.reg_base, h.env.R, h.isp_reset)
                                                             : vip::RegModel::regfile_map(h.reg_base);
  model.set_sequencer(&env_->reg_agent(e).sequencer());
  model.set_reporter(&reporter());
  return model;
}

void TestTop::send_frame(const codec::FrameTxn& frame, const std::vector<dut::IspConfig>& configs) {
  codec::FrameTxn f = frame;
  f.frame_id = static_cast<std::uint16_t>(frame_seq_++);
  auto* fsb = env_->frame_scoreboard();
  if (fsb == nullptr || env_->video_agent(0).driver() == nullptr) {
    throw ConfigError("topology has no video path to send frames on");
  }
  fsb->expect(dut::apply_golden_pipeline(f, configs, cfg_.hdl.env.R));
  env_->video_agent(0).driver()->send_frame(f);
}

bool TestTop::drain_frames(std::uint64_t budget) {
  auto* fsb = env_->frame_scoreboard();
  std::uint64_t spent = 0;
  while (fsb->outstanding() > 0 && spent < budget) {
    link_.advance(kDrainChunk);
    spent += kDrainChunk;
    advanced_ += kDrainChunk;
  }
  if (fsb->outstanding() > 0) {
    reporter().error("FRAMES", std::to_string(fsb->outstanding()) + " frame(s) still outstanding after " +
                                   std::to_string(spent) + " cycles");
    return false;
  }
  return true;
}

dut::IspConfig isp_config_from_model(const vip::RegModel& model, std::size_t ip) {
  const std::string p = "ip" + std::to_string(ip) + ".";
  dut::IspConfig c;
  c.enable = model.mirror(p + "ENABLE");
  c.gain = model.mirror(p + "GAIN");
  c.offset = model.mirror(p + "OFFSET");
  c.clamp_min = model.mirror(p + "CLAMP_MIN");
  c.clamp_max = model.mirror(p + "CLAMP_MAX");
  return c;
}

// ---------------------------------------------------------------------------
// Built-in tests

namespace {

void reg_smoke(TestTop& t) {
  const auto& h = t.config().hdl;
  for (std::size_t e = 0; e < t.env().reg_agent_count(); ++e) {
    auto model = t.make_reg_model(e);
    if (h.dut == DutKind::kIsp && e == 0) {
      model.read("ip0.VERSION");
      model.write("ip0.GAIN", 0x0200);
      model.read("ip0.GAIN");
      t.reg_access(e, h.reg_base + dut::kRegOffset + 0x40, 0, 0);  // unknown offset: ERROR
      continue;
    }
    for (std::uint32_t q = 0; q < 4; ++q) {
      const std::string name = "r" + std::to_string(q * 64 + 1);
      model.write(name, 0xA5A50000u | (q << 8) | q);
      model.read(name);
    }
    t.reg_access(e, h.reg_base + 0x20, 0x11223344, 0x3);
    t.reg_access(e, h.reg_base + 0x20, 0, 0);
    t.reg_access(e, h.reg_base + dut::kRegFileSpan, 0, 0);  // unmapped: ERROR
  }
}

void reg_random_rw(TestTop& t) {
  const auto& h = t.config().hdl;
  auto& rng = t.prng();
  const std::size_t agents = t.env().reg_agent_count();
  for (std::uint64_t i = 0; i < t.config().txns; ++i) {
    const std::size_t e = agents > 1 ? rng.below(agents) : 0;
    std::uint32_t addr;
    if (rng.chance(1, 20)) {
      addr = h.reg_base + dut::kRegFileSpan + 4 * static_cast<std::uint32_t>(rng.below(dut::kRegFileWords));
    } else {
      addr = h.reg_base + 4 * static_cast<std::uint32_t>(rng.below(dut::kRegFileWords));
    }
    if (rng.chance(1, 2)) {
      const auto data = static_cast<std::uint32_t>(rng.next());
      const auto be = rng.chance(3, 4) ? std::uint8_t{0xF} : static_cast<std::uint8_t>(rng.range(1, 14));
      t.reg_access(e, addr, data, be);
    } else {
      t.reg_access(e, addr, 0, 0);
    }
  }
}

codec::FrameTxn random_frame(Prng& rng) {
  codec::FrameTxn f;
  f.width = static_cast<std::uint16_t>(rng.range(1, 32));
  f.height = static_cast<std::uint16_t>(rng.range(1, 32));
  f.pixels.resize(std::size_t{f.width} * f.height);
  for (auto& px : f.pixels) px = static_cast<std::uint16_t>(rng.next());
  return f;
}

void configure_isp(TestTop& t, vip::RegModel& model) {
  auto& rng = t.prng();
  for (std::uint32_t i = 0; i < t.config().hdl.env.R; ++i) {
    const std::string p = "ip" + std::to_string(i) + ".";
    model.write(p + "ENABLE", rng.chance(9, 10) ? 1 : 0);
    model.write(p + "GAIN", static_cast<std::uint32_t>(rng.range(0x40, 0x300)));
    model.write(p + "OFFSET", static_cast<std::uint32_t>(rng.range(0, 512) - 256) & 0xFFFFu);
    model.write(p + "CLAMP_MIN", static_cast<std::uint32_t>(rng.range(0, 0x400)));
    model.write(p + "CLAMP_MAX", static_cast<std::uint32_t>(rng.range(0xC000, 0xFFFF)));
    model.read(p + "GAIN");
  }
}

std::vector<dut::IspConfig> model_configs(const TestTop& t, const vip::RegModel& model) {
  std::vector<dut::IspConfig> out;
  for (std::uint32_t i = 0; i < t.config().hdl.env.R; ++i) out.push_back(isp_config_from_model(model, i));
  return out;
}

void run_frame_batch(TestTop& t, const vip::RegModel& model, std::uint64_t count) {
  const auto configs = model_configs(t, model);
  const auto& h = t.config().hdl;
  std::uint64_t budget = std::uint64_t{h.env.R} * h.pipeline_latency + 4 * kDrainChunk;
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto f = random_frame(t.prng());
    budget += f.pixels.size() + 2;
    t.send_frame(f, configs);
  }
  t.drain_frames(budget);
}

void isp_frames(TestTop& t) {
  auto model = t.make_reg_model(0);
  for (std::uint32_t i = 0; i < t.config().hdl.env.R; ++i) model.read("ip" + std::to_string(i) + ".VERSION");
  configure_isp(t, model);
  run_frame_batch(t, model, t.config().frames);
}

void subsystem_chain(TestTop& t) {
  const auto& h = t.config().hdl;
  auto model = t.make_reg_model(0);
  for (std::uint32_t i = 0; i < h.env.R; ++i) model.read("ip" + std::to_string(i) + ".VERSION");
  // Past the last IP window nothing decodes; the driver times out.
  t.reg_access(0, h.reg_base + h.env.R * dut::kIpStride, 0, 0);
  const std::uint64_t first = (t.config().frames + 1) / 2;
  configure_isp(t, model);
  run_frame_batch(t, model, first);
  configure_isp(t, model);
  run_frame_batch(t, model, t.config().frames - first);
}

}  // namespace

TestBody builtin_test(const std::string& name) {
  if (name == "reg_smoke") return reg_smoke;
  if (name == "reg_random_rw") return reg_random_rw;
  if (name == "isp_frames") return isp_frames;
  if (name == "subsystem_chain") return subsystem_chain;
  throw UsageError("unknown test '" + name + "'");
}

}  // namespace coemu::runner
