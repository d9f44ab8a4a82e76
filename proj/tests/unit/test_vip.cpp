#include <gtest/gtest.h>

#include <functional>

#include "codec/transaction.hpp"
#include "common/error.hpp"
#include "dut/isp_regs.hpp"
#include "link/hvl_link.hpp"
#include "link/inproc.hpp"
#include "runner/env.hpp"
#include "runner/hdl_topology.hpp"
#include "runner/ports.hpp"
#include "vip/proxies.hpp"
#include "vip/records.hpp"
#include "vip/reg_model.hpp"

using namespace coemu;
using codec::RegPacket;
using codec::ResponseOpcode;

namespace {

class Root : public uvm::Component {
 public:
  using Body = std::function<void(Root&)>;
  Root(uvm::Context& ctx, const runner::HdlConfig& hdl, Body body)
      : Component(runner::kTestTopName, ctx), hdl_(hdl), body_(std::move(body)) {}
  void build_phase() override {
    auto& env = create<uvm::Component>("env");
    for (std::uint32_t e = 0; e < hdl_.env.E; ++e) agents.push_back(&env.create<vip::RegAgent>("reg_agent" + std::to_string(e)));
    for (std::uint32_t m = 0; m < hdl_.env.M(); ++m) {
      video.push_back(&env.create<vip::VideoAgent>("video_agent" + std::to_string(m), m < hdl_.env.A, m < hdl_.env.C));
    }
    for (std::uint32_t d = 0; d < hdl_.env.D; ++d) irqs.push_back(&env.create<vip::IrqMonitorProxy>("irq" + std::to_string(d)));
  }
  void run_phase() override {
    if (body_) body_(*this);
  }
  std::vector<vip::RegAgent*> agents;
  std::vector<vip::VideoAgent*> video;
  std::vector<vip::IrqMonitorProxy*> irqs;

 private:
  runner::HdlConfig hdl_;
  Body body_;
};

// HDL topology, in-process link and an HVL root wired through the registry.
struct Bench {
  runner::HdlConfig hdl;
  std::unique_ptr<runner::HdlTopology> topo;
  link::WireCapture cap;
  std::unique_ptr<link::Link> link;
  uvm::Context ctx;

  explicit Bench(runner::DutKind dut = runner::DutKind::kRegFile, std::uint32_t R = 1) {
    hdl.dut = dut;
    if (dut == runner::DutKind::kIsp) {
      hdl.env.A = hdl.env.C = hdl.env.D = 1;
      hdl.env.R = R;
    }
    topo = std::make_unique<runner::HdlTopology>(hdl);
    link::Link::Options o;
    o.capture = &cap;
    link = std::make_unique<link::Link>(std::make_unique<link::InProcTransport>(topo->endpoint()),
                                        runner::topology_ports(hdl), o);
  }
  uvm::ReportSummary run(Root::Body body, bool bind = true) {
    if (bind) runner::bind_topology(ctx.registry(), *link, hdl);
    Root root(ctx, hdl, std::move(body));
    auto s = run_phases(root);
    if (!link->closed()) link->shutdown();
    return s;
  }
};

RegPacket item(std::uint32_t addr, std::uint32_t data, std::uint8_t be) {
  RegPacket p;
  p.addr = addr;
  p.data = data;
  p.be = be;
  return p;
}

// Frames and irqs arrive asynchronously; advance until `frames` are back.
std::vector<codec::FrameTxn> drain(Bench& b, Root& r, std::size_t frames, std::uint64_t budget = 2000) {
  std::vector<codec::FrameTxn> out;
  for (std::uint64_t spent = 0; spent < budget && out.size() < frames; spent += 16) {
    b.link->advance(16);
    for (auto& f : r.video[0]->monitor()->collect_frames()) out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

TEST(RegDriver, OneItemIsOneCall) {
  Bench b;
  const auto s = b.run([](Root& r) { r.agents[0]->sequencer().push(item(0x10, 0x1234, 0xF)); });
  EXPECT_TRUE(s.passed) << s.line();
  EXPECT_EQ(b.cap.count(link::MsgType::kXtfCall), 1u);
  EXPECT_EQ(b.cap.count(link::MsgType::kXtfReturn), 1u);
}

TEST(RegDriver, ZeroItemsNoTraffic) {
  Bench b;
  const auto s = b.run({});
  EXPECT_TRUE(s.passed);
  EXPECT_EQ(b.cap.count(link::MsgType::kXtfCall), 0u);
}

TEST(RegDriver, ReadBackAndCyclesPerTransaction) {
  Bench b;
  b.run([&](Root& r) {
    auto& seqr = r.agents[0]->sequencer();
    const auto w = seqr.execute(item(0x20, 0xDEADBEEF, 0xF));
    EXPECT_EQ(w.r_opc, static_cast<std::uint8_t>(ResponseOpcode::kOk));
    const auto t0 = b.topo->kernel().now();
    const auto rd = seqr.execute(item(0x20, 0, 0));
    EXPECT_EQ(b.topo->kernel().now() - t0, 3u);
    EXPECT_EQ(rd.r_data, 0xDEADBEEFu);
    EXPECT_EQ(rd.r_opc, static_cast<std::uint8_t>(ResponseOpcode::kOk));
    EXPECT_EQ(rd.addr, 0x20u);
    EXPECT_EQ(rd.r_req, 1);
  });
}

TEST(RegDriver, UndecodedAddressTimesOut) {
  Bench b(runner::DutKind::kIsp);
  b.run([&](Root& r) {
    const auto t0 = b.topo->kernel().now();
    const auto rsp = r.agents[0]->sequencer().execute(item(0x1000, 0, 0));
    EXPECT_EQ(rsp.r_opc, static_cast<std::uint8_t>(ResponseOpcode::kError));
    EXPECT_GE(b.topo->kernel().now() - t0, std::uint64_t{b.hdl.timeout});
  });
}

TEST(RegDriver, UnboundIsFatalInBuild) {
  Bench b;
  const auto s = b.run({}, false);
  EXPECT_FALSE(s.passed);
  EXPECT_FALSE(s.run_entered);
  EXPECT_EQ(s.aborted_in, uvm::Phase::kBuild);
}

TEST(RegDriver, RequestIsOneCyclePulse) {
  Bench b;
  std::vector<std::uint32_t> widths;
  std::uint32_t high = 0;
  const auto req = b.topo->reg_bus(0).req;
  b.topo->kernel().register_observer("~pulse", [&](const hdl::Kernel& k) {
    if (k.read(req) == 1) {
      ++high;
    } else if (high > 0) {
      widths.push_back(high);
      high = 0;
    }
  });
  b.run([](Root& r) {
    for (std::uint32_t i = 0; i < 20; ++i) r.agents[0]->sequencer().push(item(4 * i, i, i % 2 ? 0xF : 0));
  });
  EXPECT_EQ(widths, std::vector<std::uint32_t>(20, 1));
}

TEST(RegMonitor, MirrorsDriverInOrder) {
  Bench b;
  std::vector<vip::MonitorRecord> seen;
  std::vector<RegPacket> driven;
  const auto s = b.run([&](Root& r) {
    r.agents[0]->monitor().ap.subscribe([&](const vip::MonitorRecord& m) { seen.push_back(m); });
    r.agents[0]->driver().responses.subscribe([&](const RegPacket& p) { driven.push_back(p); });
    for (std::uint32_t i = 0; i < 30; ++i) {
      r.agents[0]->sequencer().push(item(0x40 + 4 * (i % 5), 0x1000 + i, i % 3 == 0 ? 0 : 0xF));
    }
    r.agents[0]->driver().run_phase();
    b.link->advance(4);  // flush the last record
  });
  EXPECT_TRUE(s.passed) << s.line();
  ASSERT_EQ(seen.size(), 30u);
  ASSERT_EQ(driven.size(), 30u);
  for (std::size_t i = 0; i < seen.size(); ++i) {
    EXPECT_FALSE(seen[i].protocol_error);
    EXPECT_EQ(seen[i].packet.addr, driven[i].addr) << i;
    EXPECT_EQ(seen[i].packet.data, driven[i].data) << i;
    EXPECT_EQ(seen[i].packet.be, driven[i].be) << i;
    EXPECT_EQ(seen[i].packet.r_data, driven[i].r_data) << i;
    EXPECT_EQ(seen[i].packet.r_opc, driven[i].r_opc) << i;
    if (i > 0) EXPECT_LT(seen[i - 1].cycle, seen[i].cycle);
  }
}

TEST(RegMonitor, SpuriousResponseIsCountedNotFatal) {
  Bench b;
  b.topo->regfile(0)->slave().inject_spurious_response(20);
  const auto s = b.run([&](Root& r) {
    b.link->advance(30);
    EXPECT_EQ(r.agents[0]->monitor().protocol_errors(), 1u);
    EXPECT_EQ(r.agents[0]->monitor().observed(), 0u);
  });
  EXPECT_EQ(s.errors, 1u);
  EXPECT_TRUE(s.run_entered);
}

TEST(RecordCodec, MonitorRecordRoundTrip) {
  vip::MonitorRecord m;
  m.cycle = 0x0123456789ABCDEFull;
  m.packet = item(0xFFFFFFFC, 0xA5A5A5A5, 0x9);
  m.packet.r_req = 1;
  m.packet.r_data = 7;
  const auto bits = vip::pack_monitor_record(m);
  EXPECT_EQ(bits.width(), vip::kMonitorRecordWidth);
  EXPECT_EQ(vip::unpack_monitor_record(bits), m);
  m.protocol_error = true;
  EXPECT_EQ(vip::unpack_monitor_record(vip::pack_monitor_record(m)), m);
}

TEST(RegModel, GainWriteReadAndReadOnly) {
  Bench b(runner::DutKind::kIsp);
  const auto s = b.run([&](Root& r) {
    auto model = vip::RegModel::isp_map(0, 1, dut::IspConfig{});
    model.set_sequencer(&r.agents[0]->sequencer());
    model.set_reporter(&r.reporter());
    EXPECT_EQ(model.write("ip0.GAIN", 0x0200), ResponseOpcode::kOk);
    EXPECT_EQ(model.read("ip0.GAIN"), 0x0200u);
    EXPECT_EQ(model.mirror("ip0.GAIN"), 0x0200u);
    EXPECT_EQ(model.mirror("ip0.VERSION"), dut::kIspVersion);
    EXPECT_EQ(model.read("ip0.VERSION"), dut::kIspVersion);
    EXPECT_THROW(model.write("ip0.VERSION", 1), MapError);
    EXPECT_THROW(model.read("ip0.NOPE"), MapError);
    EXPECT_EQ(model.mismatches(), 0u);
  });
  EXPECT_TRUE(s.passed) << s.line();
}

TEST(RegModel, MismatchIsReported) {
  Bench b;
  const auto s = b.run([&](Root& r) {
    auto model = vip::RegModel::regfile_map(0, 4);
    model.set_sequencer(&r.agents[0]->sequencer());
    model.set_reporter(&r.reporter());
    r.agents[0]->sequencer().execute(item(0x4, 0x55, 0xF));  // behind the model's back
    EXPECT_EQ(model.read("r1"), 0x55u);
    EXPECT_EQ(model.mismatches(), 1u);
    EXPECT_EQ(model.mirror("r1"), 0x55u);
  });
  EXPECT_EQ(s.errors, 1u);
}

TEST(RegModel, MapValidation) {
  vip::RegModel m;
  m.add_register("a", 0x0, 0, vip::RegModel::Access::kRW);
  EXPECT_THROW(m.add_register("a", 0x4, 0, vip::RegModel::Access::kRW), MapError);
  EXPECT_THROW(m.add_register("b", 0x0, 0, vip::RegModel::Access::kRW), MapError);
  EXPECT_THROW(m.add_register("c", 0x2, 0, vip::RegModel::Access::kRW), MapError);
  const auto isp = vip::RegModel::isp_map(0x100, 2, dut::IspConfig{});
  EXPECT_EQ(isp.registers().size(), 12u);
  EXPECT_EQ(isp.reg("ip1.GAIN").address, 0x100u + dut::kIpStride + dut::kRegGain);
  EXPECT_EQ(isp.reg("ip1.GAIN").reset, 0x0100u);
}

TEST(Video, IdentityFrameAndOneIrq) {
  Bench b(runner::DutKind::kIsp);
  const auto s = b.run([&](Root& r) {
    codec::FrameTxn f{0, 2, 2, {10, 20, 30, 40}};
    r.video[0]->driver()->send_frame(f);
    const auto out = drain(b, r, 1);
    b.link->advance(8);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].pixels, f.pixels);
    EXPECT_EQ(out[0].width, 2);
    EXPECT_EQ(out[0].height, 2);
    EXPECT_EQ(r.irqs[0]->pulses(), 1u);
  });
  EXPECT_TRUE(s.passed) << s.line();
}

TEST(Video, NoFramesNoIrq) {
  Bench b(runner::DutKind::kIsp);
  b.run([&](Root& r) {
    b.link->advance(100);
    EXPECT_TRUE(r.video[0]->monitor()->collect_frames().empty());
    EXPECT_EQ(r.irqs[0]->pulses(), 0u);
  });
}

TEST(Video, ThreeFramesInOrder) {
  Bench b(runner::DutKind::kIsp, 3);
  b.run([&](Root& r) {
    std::vector<codec::FrameTxn> sent;
    for (std::uint16_t i = 0; i < 3; ++i) {
      codec::FrameTxn f{i, static_cast<std::uint16_t>(3 + i), 2, {}};
      for (int p = 0; p < f.width * f.height; ++p) f.pixels.push_back(static_cast<std::uint16_t>(100 * i + p));
      r.video[0]->driver()->send_frame(f);
      sent.push_back(f);
    }
    const auto out = drain(b, r, 3);
    b.link->advance(8);
    ASSERT_EQ(out.size(), 3u);
    std::size_t in_px = 0, out_px = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_EQ(out[i].pixels, sent[i].pixels) << i;
      in_px += sent[i].pixels.size();
      out_px += out[i].pixels.size();
    }
    EXPECT_EQ(in_px, out_px);
    EXPECT_EQ(r.irqs[0]->pulses(), 3u);
    EXPECT_EQ(r.video[0]->driver()->frames_sent(), 3u);
  });
}

TEST(Video, InvalidFrameRejected) {
  Bench b(runner::DutKind::kIsp);
  b.run([&](Root& r) {
    EXPECT_THROW(r.video[0]->driver()->send_frame(codec::FrameTxn{0, 2, 2, {1, 2, 3}}), Error);
    EXPECT_THROW(r.video[0]->driver()->send_frame(codec::FrameTxn{0, 0, 2, {}}), Error);
  });
}
