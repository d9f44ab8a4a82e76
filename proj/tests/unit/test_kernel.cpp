#include <gtest/gtest.h>

#include <sstream>
#include <vector>

#include "common/error.hpp"
#include "hdl/kernel.hpp"

using namespace coemu;
using namespace coemu::hdl;

TEST(Kernel, StepAdvancesOneCycle) {
  Kernel k;
  EXPECT_EQ(k.now(), 0u);
  EXPECT_EQ(k.step_cycle(), 1u);
  EXPECT_EQ(k.now(), 1u);
}

TEST(Kernel, NoProcessesTimeAdvancesWithoutChanges) {
  Kernel k(ResetGen{0, false});
  auto s = k.add_signal("s", 8, 0x5A);
  std::ostringstream trace;
  k.set_trace(&trace);
  k.run_cycles(10);
  EXPECT_EQ(k.now(), 10u);
  EXPECT_EQ(k.read(s), 0x5Au);
  EXPECT_TRUE(trace.str().empty());
}

TEST(Kernel, ProcessesRunInKeyOrder) {
  Kernel k;
  std::vector<std::string> order;
  // Registered out of order on purpose.
  k.register_process("b", [&](Kernel&) { order.push_back("b"); });
  k.register_process("a", [&](Kernel&) { order.push_back("a"); });
  k.run_cycles(2);
  EXPECT_EQ(order, (std::vector<std::string>{"a", "b", "a", "b"}));
}

TEST(Kernel, TwoPhaseSwap) {
  Kernel k;
  auto x = k.add_signal("x", 16, 1);
  auto y = k.add_signal("y", 16, 2);
  k.register_process("p1", [&](Kernel& kk) { kk.write(x, kk.read(y)); });
  k.register_process("p2", [&](Kernel& kk) { kk.write(y, kk.read(x)); });
  k.step_cycle();
  EXPECT_EQ(k.read(x), 2u);
  EXPECT_EQ(k.read(y), 1u);
  k.step_cycle();
  EXPECT_EQ(k.read(x), 1u);
  EXPECT_EQ(k.read(y), 2u);
}

TEST(Kernel, SameCycleWriteIsInvisible) {
  Kernel k;
  auto s = k.add_signal("s", 8, 0);
  std::vector<std::uint64_t> seen;
  k.register_process("a_writer", [&](Kernel& kk) { kk.write(s, kk.now() + 10); });
  k.register_process("b_reader", [&](Kernel& kk) { seen.push_back(kk.read(s)); });
  k.run_cycles(3);
  EXPECT_EQ(seen, (std::vector<std::uint64_t>{0, 10, 11}));
}

TEST(Kernel, ResetAssertedForExactlyAssertCycles) {
  Kernel k(ResetGen{4, false});
  std::vector<std::pair<SimTime, std::uint64_t>> sampled;
  k.register_process("s", [&](Kernel& kk) { sampled.emplace_back(kk.now(), kk.read(kk.reset_signal())); });
  std::ostringstream trace;
  k.set_trace(&trace);
  k.run_cycles(6);
  for (const auto& [cycle, rst] : sampled) EXPECT_EQ(rst, cycle < 4 ? 1u : 0u) << "cycle " << cycle;
  EXPECT_EQ(trace.str(), "4,rst,0\n");
}

TEST(Kernel, ActiveLowReset) {
  Kernel k(ResetGen{2, true});
  EXPECT_EQ(k.read(k.reset_signal()), 0u);
  k.run_cycles(2);
  EXPECT_EQ(k.read(k.reset_signal()), 1u);
  EXPECT_FALSE(k.in_reset());
}

TEST(Kernel, RunCyclesZeroAndOffset) {
  Kernel k;
  EXPECT_EQ(k.run_cycles(0), 0u);
  k.run_cycles(5);
  EXPECT_EQ(k.run_cycles(100), 105u);
}

namespace {

// A small free-running design: a counter and an LFSR feeding each other.
std::string traced_run(const std::vector<std::uint64_t>& chunks) {
  Kernel k(ResetGen{3, false});
  auto cnt = k.add_signal("cnt", 8);
  auto lfsr = k.add_signal("lfsr", 16, 0xACE1);
  auto mix = k.add_signal("mix", 16);
  k.register_process("cnt", [&](Kernel& kk) {
    if (kk.read(kk.reset_signal()) == 0) kk.write(cnt, (kk.read(cnt) + 1) & 0xFF);
  });
  k.register_process("lfsr", [&](Kernel& kk) {
    const auto v = kk.read(lfsr);
    const auto bit = ((v >> 0) ^ (v >> 2) ^ (v >> 3) ^ (v >> 5)) & 1;
    kk.write(lfsr, (v >> 1) | (bit << 15));
  });
  k.register_process("mix", [&](Kernel& kk) { kk.write(mix, kk.read(lfsr) ^ kk.read(cnt)); });
  std::ostringstream trace;
  k.set_trace(&trace);
  for (auto n : chunks) k.run_cycles(n);
  return trace.str();
}

}  // namespace

TEST(Kernel, RunCyclesSplitEqualsWhole) {
  const auto whole = traced_run({70});
  EXPECT_EQ(traced_run({30, 40}), whole);
  EXPECT_EQ(traced_run({1, 0, 69}), whole);
  EXPECT_FALSE(whole.empty());
}

TEST(Kernel, DeterministicAcrossRuns) { EXPECT_EQ(traced_run({50}), traced_run({50})); }

TEST(Kernel, DuplicateKeyIsConfigError) {
  Kernel k;
  k.register_process("p", [](Kernel&) {});
  EXPECT_THROW(k.register_process("p", [](Kernel&) {}), ConfigError);
}

TEST(Kernel, RegistrationAfterStartIsRejected) {
  Kernel k;
  k.step_cycle();
  EXPECT_THROW(k.register_process("late", [](Kernel&) {}), ConfigError);
}

TEST(Kernel, ProcessFaultCarriesCycle) {
  Kernel k;
  k.register_process("bad", [](Kernel& kk) {
    if (kk.now() == 3) throw std::runtime_error("model fault");
  });
  k.run_cycles(3);
  try {
    k.step_cycle();
    FAIL() << "expected SimulationError";
  } catch (const SimulationError& e) {
    EXPECT_EQ(e.cycle(), 3u);
  }
}

TEST(Kernel, WidthIsEnforced) {
  Kernel k;
  auto s = k.add_signal("s", 4);
  k.register_process("w", [&](Kernel& kk) { kk.write(s, 0x10); });
  EXPECT_THROW(k.step_cycle(), SimulationError);
  EXPECT_THROW(k.add_signal("wide", 65), ConfigError);
  EXPECT_THROW(k.add_signal("zero", 0), ConfigError);
}

TEST(Kernel, MultipleDriversRejected) {
  Kernel k;
  auto s = k.add_signal("s", 1);
  k.register_process("a", [&](Kernel& kk) { kk.write(s, 1); });
  k.register_process("b", [&](Kernel& kk) { kk.write(s, 0); });
  EXPECT_THROW(k.step_cycle(), SimulationError);
}

TEST(Kernel, WriteOutsideProcessRejected) {
  Kernel k;
  auto s = k.add_signal("s", 1);
  EXPECT_THROW(k.write(s, 1), Error);
}

TEST(Kernel, ObserversSeeCommittedValues) {
  Kernel k;
  auto s = k.add_signal("s", 8);
  k.register_process("w", [&](Kernel& kk) { kk.write(s, kk.now() + 1); });
  std::vector<std::uint64_t> seen;
  k.register_observer("o", [&](const Kernel& kk) { seen.push_back(kk.read(s)); });
  k.run_cycles(3);
  EXPECT_EQ(seen, (std::vector<std::uint64_t>{1, 2, 3}));
}

TEST(Kernel, DisabledClockCannotStep) {
  Kernel k(ResetGen{}, ClockGen{1, false});
  EXPECT_THROW(k.step_cycle(), Error);
  EXPECT_EQ(k.now(), 0u);
}

TEST(Kernel, ClockPeriodScalesTicks) {
  Kernel k(ResetGen{}, ClockGen{10, true});
  k.run_cycles(3);
  EXPECT_EQ(k.ticks(), 30u);
}

TEST(Kernel, RequireDirectiveGuardsStepping) {
  Kernel k;
  k.require_directive(true);
  EXPECT_THROW(k.step_cycle(), SimulationError);
  EXPECT_EQ(k.now(), 0u);
  {
    Kernel::DirectiveScope scope(k);
    k.step_cycle();
  }
  EXPECT_EQ(k.now(), 1u);
  EXPECT_THROW(k.run_cycles(1), SimulationError);
}
