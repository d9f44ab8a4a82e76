// Acceptance checks: prints one PASS/FAIL line per criterion (1-8).
// Exit status is the number of failing criteria not listed in --expect-fail.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "codec/transaction.hpp"
#include "common/error.hpp"
#include "dut/golden.hpp"
#include "dut/isp_regs.hpp"
#include "link/hvl_link.hpp"
#include "link/inproc.hpp"
#include "link/message.hpp"
#include "runner/config.hpp"
#include "runner/env.hpp"
#include "runner/hdl_topology.hpp"
#include "runner/ports.hpp"
#include "runner/session.hpp"
#include "vip/records.hpp"

#ifndef COEMU_SOURCE_DIR
#define COEMU_SOURCE_DIR "."
#endif

using namespace coemu;
using runner::RunConfig;
using runner::TransportKind;
using Clock = std::chrono::steady_clock;

namespace {

// Thresholds pinned here.
constexpr double kCodecBudgetSeconds = 1.0;
constexpr double kCrossModeBudgetSeconds = 30.0;
constexpr double kSpeedupTarget = 10.0;
constexpr double kPerfBudgetSeconds = 300.0;
constexpr double kCoverageTarget = 90.0;
constexpr std::uint64_t kWireSlackPerRun = 16;  // hello, shutdown, status, trailing records

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Independent shift-and-or view of a register packet: req|eop|addr|data|be|r_req|r_data|r_opc, MSB first.
unsigned __int128 oracle_value(const codec::RegPacket& p) {
  unsigned __int128 v = 0;
  auto push = [&v](std::uint64_t field, unsigned width) { v = (v << width) | field; };
  push(p.req, 1);
  push(p.eop, 1);
  push(p.addr, 32);
  push(p.data, 32);
  push(p.be, 4);
  push(p.r_req, 1);
  push(p.r_data, 32);
  push(p.r_opc, 2);
  return v;
}

unsigned __int128 value_of(const codec::PackedBits& b) {
  unsigned __int128 v = 0;
  for (std::size_t i = b.width(); i-- > 0;) v = (v << 1) | (b.bit(i) ? 1u : 0u);
  return v;
}

codec::RegPacket random_packet(std::mt19937_64& rng) {
  codec::RegPacket p;
  p.req = rng() & 1;
  p.eop = rng() & 1;
  p.addr = static_cast<std::uint32_t>(rng());
  p.data = static_cast<std::uint32_t>(rng());
  p.be = rng() & 0xF;
  p.r_req = rng() & 1;
  p.r_data = static_cast<std::uint32_t>(rng());
  p.r_opc = rng() & 0x3;
  return p;
}

Outcome criterion1() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  int bad = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto p = random_packet(rng);
    const auto bits = codec::pack_reg(p);
    if (codec::unpack_reg(bits) != p || value_of(bits) != oracle_value(p)) ++bad;
  }
  o.require(bad == 0, std::to_string(bad) + " round-trip failures");

  std::ifstream in(std::string(COEMU_SOURCE_DIR) + "/tests/data/reg_vectors.txt");
  int vectors = 0, vec_bad = 0;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    const auto [p, want] = codec::parse_golden_vector_line(line);
    ++vectors;
    if (codec::pack_reg(p) != want) ++vec_bad;
  }
  o.require(vectors > 0, "golden vectors missing");
  o.require(vec_bad == 0, std::to_string(vec_bad) + " golden vector mismatches");
  const double secs = since(t0);
  o.require(secs < kCodecBudgetSeconds, "took " + fmt("%.3fs", secs));
  o.note("10000 round-trips, " + std::to_string(vectors) + " vectors, " + fmt("%.3fs", secs));
  return o;
}

Outcome criterion2() {
  Outcome o;
  std::mt19937_64 rng(77);
  int bad = 0;
  for (int i = 0; i < 10000; ++i) {
    link::Message m;
    m.type = static_cast<link::MsgType>(rng() % 8);
    m.port = static_cast<std::uint16_t>(rng());
    codec::PackedBits b(rng() % 257);
    for (std::size_t k = 0; k < b.width(); ++k) b.set_bit(k, rng() & 1);
    m.payload = b;
    if (link::decode_frame(link::encode_frame(m)) != m) ++bad;
  }
  o.require(bad == 0, std::to_string(bad) + " message round-trip failures");

  const std::vector<std::uint8_t> shutdown{0x53, 0x43, 0x01, 0x07, 0, 0, 0, 0, 0, 0};
  o.require(link::encode_frame(link::Message{link::MsgType::kShutdown, 0, {}}) == shutdown, "SHUTDOWN frame differs");

  codec::RegPacket p;
  p.req = 1;
  p.addr = 0x10;
  p.data = 0xA5A5A5A5;
  p.be = 0xF;
  const std::vector<std::uint8_t> call{0x53, 0x43, 0x01, 0x00, 0x00, 0x03, 0x00, 0x00, 0x00, 0x69, 0x80, 0x00,
                                       0x00, 0x04, 0x29, 0x69, 0x69, 0x69, 0x7c, 0x00, 0x00, 0x00, 0x00, 0x00};
  o.require(link::encode_frame(link::Message{link::MsgType::kXtfCall, 3, codec::pack_reg(p)}) == call,
            "XTF_CALL frame differs");
  o.note("10000 messages, 2 golden frames");
  return o;
}

RunConfig base(const std::string& test, link::LinkMode mode, TransportKind tr) {
  RunConfig c;
  c.test = test;
  c.mode = mode;
  c.transport = tr;
  return c;
}

Outcome criterion3() {
  Outcome o;
  const auto t0 = Clock::now();
  std::vector<runner::RunResult> runs;
  for (auto mode : {link::LinkMode::kLockstep, link::LinkMode::kTransactional}) {
    for (auto tr : {TransportKind::kInProc, TransportKind::kSocket}) {
      auto c = base("reg_random_rw", mode, tr);
      c.seed = 7;
      c.txns = 1000;
      runs.push_back(runner::run_test(c));
      o.require(runs.back().exit_code == 0, std::string(runner::mode_name(mode)) + "/" + runner::to_string(tr) +
                                                " exit " + std::to_string(runs.back().exit_code));
    }
  }
  for (std::size_t i = 1; i < runs.size(); ++i) {
    o.require(runs[i].txn_log == runs[0].txn_log, "txn log differs in run " + std::to_string(i));
    o.require(runs[i].coverage.report() == runs[0].coverage.report(), "coverage differs in run " + std::to_string(i));
    o.require(runs[i].report() == runs[0].report(), "verdict differs in run " + std::to_string(i));
  }
  o.require(runs[0].txn_log.size() == 1000, "expected 1000 log lines, got " + std::to_string(runs[0].txn_log.size()));
  const double secs = since(t0);
  o.require(secs < kCrossModeBudgetSeconds, "took " + fmt("%.1fs", secs));
  o.note("4 runs identical, " + fmt("%.2fs", secs));
  return o;
}

Outcome criterion4() {
  Outcome o;
  constexpr std::size_t kRegs = 16;
  auto c = base("reg_random_rw", link::LinkMode::kTransactional, TransportKind::kInProc);
  runner::apply_test_defaults(c);
  std::uint64_t mirror_mismatch = 0, read_mismatch = 0, pairs = 0;
  const auto result = runner::run_with_body(c, [&](runner::TestTop& top) {
    auto model = vip::RegModel::regfile_map(c.hdl.reg_base, kRegs);
    model.set_sequencer(&top.env().reg_agent(0).sequencer());
    model.set_reporter(&top.reporter());
    std::array<std::uint32_t, kRegs> shadow{};
    std::mt19937_64 rng(4);
    auto check_all = [&] {
      for (std::size_t i = 0; i < kRegs; ++i) mirror_mismatch += model.mirror("r" + std::to_string(i)) != shadow[i];
    };
    for (int n = 0; n < 1000; ++n) {
      const std::size_t w = rng() % kRegs;
      const auto v = static_cast<std::uint32_t>(rng());
      model.write("r" + std::to_string(w), v);
      shadow[w] = v;
      check_all();
      const std::size_t r = rng() % kRegs;
      read_mismatch += model.read("r" + std::to_string(r)) != shadow[r];
      check_all();
      ++pairs;
    }
  });
  o.require(result.exit_code == 0, "run exit " + std::to_string(result.exit_code) + ": " + result.report());
  o.require(result.summary.errors == 0, std::to_string(result.summary.errors) + " scoreboard errors");
  o.require(mirror_mismatch == 0, std::to_string(mirror_mismatch) + " mirror/shadow mismatches");
  o.require(read_mismatch == 0, std::to_string(read_mismatch) + " read/shadow mismatches");
  o.require(pairs == 1000, "only " + std::to_string(pairs) + " pairs ran");
  o.require(result.transactions == 2000, "monitor saw " + std::to_string(result.transactions) + " transfers");
  o.note(std::to_string(pairs) + " pairs, mirror checked after every op");
  return o;
}

dut::IspConfig random_isp(std::mt19937_64& rng) {
  dut::IspConfig c;
  c.enable = rng() % 8 != 0;
  c.gain = static_cast<std::uint32_t>(rng() % 0x300);
  c.offset = static_cast<std::uint32_t>(static_cast<std::int32_t>(rng() % 2001) - 1000) & 0xFFFF;
  c.clamp_min = static_cast<std::uint32_t>(rng() % 0x100);
  c.clamp_max = 0xF000 + static_cast<std::uint32_t>(rng() % 0x1000);
  return c;
}

codec::FrameTxn random_frame(std::mt19937_64& rng) {
  codec::FrameTxn f;
  f.width = static_cast<std::uint16_t>(1 + rng() % 32);
  f.height = static_cast<std::uint16_t>(1 + rng() % 32);
  for (int i = 0; i < f.width * f.height; ++i) f.pixels.push_back(static_cast<std::uint16_t>(rng()));
  return f;
}

void program(vip::RegModel& model, std::size_t ip, const dut::IspConfig& c) {
  const std::string p = "ip" + std::to_string(ip) + ".";
  model.write(p + "ENABLE", c.enable);
  model.write(p + "GAIN", c.gain);
  model.write(p + "OFFSET", c.offset);
  model.write(p + "CLAMP_MIN", c.clamp_min);
  model.write(p + "CLAMP_MAX", c.clamp_max);
}

// First cycle at which `signal` reads 1 in a cycle,name,hex trace.
std::optional<std::uint64_t> first_high(const std::filesystem::path& trace, const std::string& signal) {
  std::ifstream in(trace);
  for (std::string line; std::getline(in, line);) {
    const auto a = line.find(',');
    const auto b = line.rfind(',');
    if (a == std::string::npos || a == b) continue;
    if (line.compare(a + 1, b - a - 1, signal) != 0) continue;
    if (std::stoull(line.substr(b + 1), nullptr, 16) != 0) return std::stoull(line.substr(0, a));
  }
  return std::nullopt;
}

Outcome criterion5(const std::filesystem::path& work) {
  Outcome o;
  auto c = base("subsystem_chain", link::LinkMode::kTransactional, TransportKind::kInProc);
  runner::apply_test_defaults(c);
  const std::uint32_t R = c.hdl.env.R;
  const std::uint32_t L = c.hdl.pipeline_latency;
  o.require(R == 3, "chain length " + std::to_string(R));

  std::mt19937_64 rng(5);
  std::vector<codec::FrameTxn> sent, expected;
  std::vector<codec::FrameTxn> got;
  std::uint64_t irqs = 0, matched = 0;
  auto result = runner::run_with_body(c, [&](runner::TestTop& top) {
    auto model = top.make_reg_model(0);
    for (int n = 0; n < 20; ++n) {
      std::vector<dut::IspConfig> cfgs;
      for (std::uint32_t ip = 0; ip < R; ++ip) {
        cfgs.push_back(random_isp(rng));
        program(model, ip, cfgs.back());
      }
      auto f = random_frame(rng);
      f.frame_id = static_cast<std::uint16_t>(n);
      sent.push_back(f);
      expected.push_back(dut::apply_golden_pipeline(f, cfgs, R));
      top.send_frame(f, cfgs);
      top.drain_frames(20000);
    }
    got = top.output_frames();
    matched = top.env().frame_scoreboard()->matched();
    irqs = top.env().irq_monitor(0).pulses();
  });
  o.require(result.exit_code == 0, "run exit " + std::to_string(result.exit_code) + ": " + result.report());
  o.require(got.size() == 20, std::to_string(got.size()) + " frames out");
  std::size_t equal = 0;
  for (std::size_t i = 0; i < std::min(got.size(), expected.size()); ++i) equal += got[i].pixels == expected[i].pixels;
  o.require(equal == 20, std::to_string(equal) + "/20 frames bit-exact vs golden");
  o.require(matched == 20, "scoreboard matched " + std::to_string(matched));
  o.require(irqs == 20, "irq pulses " + std::to_string(irqs));

  // Latency: one frame, nothing after the drain, signal trace on.
  auto lc = c;
  lc.hdl.trace_path = work / "c5_trace.csv";
  std::uint64_t adv_before = 0, adv_after = 0;
  auto lat = runner::run_with_body(lc, [&](runner::TestTop& top) {
    auto model = top.make_reg_model(0);
    std::vector<dut::IspConfig> cfgs;
    for (std::uint32_t ip = 0; ip < R; ++ip) {
      cfgs.push_back(random_isp(rng));
      program(model, ip, cfgs.back());
    }
    adv_before = top.cycles_advanced();
    top.send_frame(random_frame(rng), cfgs);
    top.drain_frames(20000);
    adv_after = top.cycles_advanced();
  });
  o.require(lat.exit_code == 0, "latency run exit " + std::to_string(lat.exit_code));
  const auto in_first = first_high(lc.hdl.trace_path, "vin0.pixel_valid");
  const auto out_first = first_high(lc.hdl.trace_path, "isp.ip" + std::to_string(R - 1) + ".out.pixel_valid");
  if (!in_first || !out_first) {
    o.require(false, "trace lacks video valid signals");
  } else {
    const std::uint64_t directive_start = lat.cycles - (adv_after - adv_before);
    const std::uint64_t want = std::uint64_t{R} * L + vip::kVideoDriveOffset;
    o.require(*out_first - directive_start == want, "latency " + std::to_string(*out_first - directive_start) +
                                                        " != " + std::to_string(want));
    o.require(*out_first - *in_first == std::uint64_t{R} * L, "pin-to-pin latency " +
                                                                 std::to_string(*out_first - *in_first));
    o.note("20 frames bit-exact, 20 irqs, latency " + std::to_string(*out_first - directive_start) + " = " +
           std::to_string(R) + "x" + std::to_string(L) + "+" + std::to_string(vip::kVideoDriveOffset));
  }
  return o;
}

Outcome criterion6() {
  Outcome o;
  const auto t0 = Clock::now();
  auto run = [](link::LinkMode mode) {
    auto c = base("reg_random_rw", mode, TransportKind::kSocket);
    c.seed = 7;
    c.txns = 10000;
    c.hdl.response_latency = 2;
    c.hdl.gate_factor = 0;
    c.explicit_keys["response_latency"] = "2";
    c.explicit_keys["gate_factor"] = "0";
    // Best of three against scheduler noise.
    std::optional<runner::RunResult> best;
    for (int i = 0; i < 3; ++i) {
      auto r = runner::run_test(c);
      if (!best || r.wall_seconds < best->wall_seconds) best = std::move(r);
    }
    return *best;
  };
  const auto lock = run(link::LinkMode::kLockstep);
  const auto txn = run(link::LinkMode::kTransactional);
  o.require(lock.exit_code == 0 && txn.exit_code == 0, "bench runs failed");
  o.require(lock.txn_log == txn.txn_log, "modes not functionally identical");

  const auto count = [](const runner::RunResult& r, link::MsgType t) { return r.wire_counts[static_cast<std::size_t>(t)]; };
  const std::uint64_t lock_sync = count(lock, link::MsgType::kCycleTick) + count(lock, link::MsgType::kCycleAck);
  o.require(lock_sync == 2 * lock.cycles, "lockstep tick+ack " + std::to_string(lock_sync) + " vs 2x" +
                                              std::to_string(lock.cycles) + " cycles");
  o.require(count(txn, link::MsgType::kCycleTick) == 0, "transactional sent ticks");
  o.require(count(txn, link::MsgType::kXtfCall) == txn.transactions, "transactional calls != transactions");
  // Per transaction: call, return, one monitor record.
  o.require(txn.wire_total <= 3 * txn.transactions + kWireSlackPerRun,
            "transactional frames " + std::to_string(txn.wire_total));

  const double speedup = lock.wall_seconds / txn.wall_seconds;
  o.require(speedup >= kSpeedupTarget, "speedup " + fmt("%.2fx", speedup) + " below " + fmt("%.0fx", kSpeedupTarget));
  const double secs = since(t0);
  o.require(secs < kPerfBudgetSeconds, "took " + fmt("%.1fs", secs));
  o.note("lockstep " + fmt("%.3fs", lock.wall_seconds) + " (" + std::to_string(lock.wire_total) + " frames), txn " +
         fmt("%.3fs", txn.wall_seconds) + " (" + std::to_string(txn.wire_total) + " frames), speedup " +
         fmt("%.2fx", speedup));
  return o;
}

Outcome criterion7() {
  Outcome o;
  runner::CoverageDb merged;
  for (const char* test : {"reg_smoke", "reg_random_rw", "isp_frames", "subsystem_chain"}) {
    std::optional<std::string> first;
    for (auto mode : {link::LinkMode::kLockstep, link::LinkMode::kTransactional}) {
      const auto r = runner::run_test(base(test, mode, TransportKind::kInProc));
      o.require(r.exit_code == 0, std::string(test) + " exit " + std::to_string(r.exit_code));
      if (!first) {
        first = r.coverage.report();
        merged.merge(r.coverage);
      } else {
        o.require(*first == r.coverage.report(), std::string(test) + " coverage differs across modes");
      }
    }
  }
  o.require(merged.percent() >= kCoverageTarget, "merged coverage " + fmt("%.1f%%", merged.percent()));
  o.note(std::to_string(merged.bins_hit()) + "/" + std::to_string(runner::CoverageDb::kBinCount) + " bins, " +
         fmt("%.1f%%", merged.percent()));
  return o;
}

// Collects project headers reachable from `header` through quoted includes.
void closure(const std::filesystem::path& src, const std::string& header, std::set<std::string>& seen) {
  if (!seen.insert(header).second) return;
  std::ifstream in(src / header);
  static const std::regex inc(R"re(^\s*#\s*include\s+"([^"]+)")re");
  for (std::string line; std::getline(in, line);) {
    std::smatch m;
    if (std::regex_search(line, m, inc)) closure(src, m[1].str(), seen);
  }
}

Outcome criterion8() {
  Outcome o;
  const std::filesystem::path src = std::string(COEMU_SOURCE_DIR) + "/src";
  std::ifstream manifest(src / "hvl_api.manifest");
  o.require(static_cast<bool>(manifest), "manifest missing");
  std::set<std::string> listed;
  for (std::string line; std::getline(manifest, line);) {
    if (!line.empty() && line[0] != '#') listed.insert(line);
  }
  static const std::regex forbidden(R"(\b(Kernel|step_cycle|run_cycles|SignalId|RegBusPins|VideoPins)\b|hdl/)");
  std::set<std::string> reach;
  for (const auto& h : listed) closure(src, h, reach);
  std::size_t scanned = 0;
  for (const auto& h : reach) {
    std::ifstream in(src / h);
    o.require(static_cast<bool>(in), h + " unreadable");
    o.require(listed.count(h) > 0, h + " reachable but not in manifest");
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) {
      ++n;
      if (std::regex_search(line, forbidden)) o.require(false, h + ":" + std::to_string(n) + " exposes '" + line + "'");
    }
    ++scanned;
  }

  // Runtime: HDL time moves only inside link directives.
  runner::HdlConfig hc;
  runner::HdlTopology topo(hc);
  bool refused = false;
  try {
    topo.kernel().step_cycle();
  } catch (const SimulationError&) {
    refused = true;
  }
  o.require(refused, "kernel stepped outside a directive");
  link::Link lk(std::make_unique<link::InProcTransport>(topo.endpoint()), runner::topology_ports(hc), {});
  auto t = topo.kernel().now();
  lk.stream_recv_ready(runner::reg_monitor_port(0));
  o.require(topo.kernel().now() == t, "time moved without a directive");
  codec::RegPacket p;
  p.req = 1;
  p.addr = 0x8;
  p.data = 1;
  p.be = 0xF;
  lk.xtf_call(runner::reg_driver_port(0), codec::pack_reg(p));
  o.require(topo.kernel().now() > t, "call did not advance time");
  t = topo.kernel().now();
  lk.advance(5);
  o.require(topo.kernel().now() == t + 5, "advance(5) moved " + std::to_string(topo.kernel().now() - t));
  lk.shutdown();
  o.note(std::to_string(scanned) + " headers clean, directive guard active");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<int> only, expect_fail;
  app.add_option("--only", only, "criteria to run (default all)")->delimiter(',');
  app.add_option("--expect-fail", expect_fail, "criteria known to be unattainable here")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const auto work = std::filesystem::temp_directory_path() / ("coemu_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(work);

  const std::map<int, std::pair<const char*, std::function<Outcome()>>> criteria{
      {1, {"codec properties", criterion1}},
      {2, {"wire format", criterion2}},
      {3, {"cross-mode determinism", criterion3}},
      {4, {"register correctness", criterion4}},
      {5, {"isp equivalence", [&] { return criterion5(work); }}},
      {6, {"performance phenomenon", criterion6}},
      {7, {"coverage parity", criterion7}},
      {8, {"guideline enforcement", criterion8}},
  };

  int unexpected = 0;
  for (const auto& [id, entry] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    Outcome o;
    try {
      o = entry.second();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const bool known = std::find(expect_fail.begin(), expect_fail.end(), id) != expect_fail.end();
    std::printf("criterion %d %s: %s%s (%s)\n", id, entry.first, o.pass ? "PASS" : "FAIL",
                !o.pass && known ? " [known unattainable]" : "", o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass && !known) ++unexpected;
  }
  std::filesystem::remove_all(work);
  return unexpected;
}
