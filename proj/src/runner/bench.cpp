#include "runner/bench.hpp"

#include <cstdio>
#include <optional>

namespace coemu::runner {

std::string BenchResult::csv() const {
  std::string out = "gate_factor,mode,cycles,transactions,wall_seconds,speedup\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%u,%s,%llu,%llu,%.6f,%.2f\n", r.gate_factor, mode_name(r.mode),
                  static_cast<unsigned long long>(r.cycles), static_cast<unsigned long long>(r.transactions),
                  r.wall_seconds, r.speedup);
    out += buf;
  }
  return out;
}

std::string BenchResult::table() const {
  std::string out;
  char buf[200];
  std::snprintf(buf, sizeof buf, "%-12s %-10s %-12s %-14s %-14s %-8s\n", "gate_factor", "cycles", "transactions",
                "lockstep_s", "txn_s", "gain");
  out += buf;
  for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
    const auto& ls = rows[i];
    const auto& tx = rows[i + 1];
    std::snprintf(buf, sizeof buf, "%-12u %-10llu %-12llu %-14.4f %-14.4f ~%.1fX\n", ls.gate_factor,
                  static_cast<unsigned long long>(ls.cycles), static_cast<unsigned long long>(ls.transactions),
                  ls.wall_seconds, tx.wall_seconds, tx.speedup);
    out += buf;
  }
  if (!functional_match) out += "INVALID: " + mismatch + "\n";
  return out;
}

BenchResult bench(const RunConfig& base, const std::vector<std::uint32_t>& gate_factors) {
  BenchResult result;
  std::optional<RunResult> baseline;  // gate factors must not change behavior either
  for (const auto g : gate_factors) {
    RunResult ref;
    double lockstep_wall = 0;
    for (const auto mode : {link::LinkMode::kLockstep, link::LinkMode::kTransactional}) {
      RunConfig cfg = base;
      cfg.mode = mode;
      cfg.hdl.gate_factor = g;
      cfg.explicit_keys["gate_factor"] = std::to_string(g);
      cfg.out_dir.clear();
      const RunResult r = run_test(cfg);

      BenchRow row;
      row.gate_factor = g;
      row.mode = mode;
      row.cycles = r.cycles;
      row.transactions = r.transactions;
      row.wall_seconds = r.wall_seconds;
      row.wire_frames = r.wire_total;
      if (mode == link::LinkMode::kLockstep) {
        lockstep_wall = r.wall_seconds;
        ref = r;
      } else {
        row.speedup = r.wall_seconds > 0 ? lockstep_wall / r.wall_seconds : 0;
      }
      result.rows.push_back(row);

      const std::string cell = "gate_factor=" + std::to_string(g) + " mode=" + mode_name(mode);
      if (r.exit_code != kExitPass && result.functional_match) {
        result.functional_match = false;
        result.mismatch = cell + " failed: " + (r.error.empty() ? r.summary.line() : r.error);
      } else if (mode != link::LinkMode::kLockstep && result.functional_match &&
                 (r.txn_log != ref.txn_log || !(r.coverage == ref.coverage) || r.cycles != ref.cycles)) {
        result.functional_match = false;
        result.mismatch = cell + " is not functionally identical to lockstep";
      } else if (baseline && result.functional_match &&
                 (r.txn_log != baseline->txn_log || r.cycles != baseline->cycles)) {
        result.functional_match = false;
        result.mismatch = cell + " differs from gate_factor=" + std::to_string(gate_factors.front());
      }
      if (!baseline) baseline = r;
    }
  }
  return result;
}

}  // namespace coemu::runner
