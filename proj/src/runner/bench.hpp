#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "runner/config.hpp"
#include "runner/session.hpp"

namespace coemu::runner {

struct BenchRow {
  std::uint32_t gate_factor = 0;
  link::LinkMode mode = link::LinkMode::kLockstep;
  std::uint64_t cycles = 0;
  std::uint64_t transactions = 0;
  double wall_seconds = 0;
  double speedup = 1.0;  // lockstep wall / this wall, same gate_factor and seed
  std::uint64_t wire_frames = 0;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  bool functional_match = true;
  std::string mismatch;  // why the run was invalidated

  /// `gate_factor,mode,cycles,transactions,wall_seconds,speedup`
  std::string csv() const;
  /// Side-by-side table, one line per gate factor.
  std::string table() const;
};

/// Runs `base` (a register workload over the socket transport unless
/// `base.transport` says otherwise) once per gate factor and mode.
/// Every cell must pass and agree on the transaction log and coverage.
BenchResult bench(const RunConfig& base, const std::vector<std::uint32_t>& gate_factors);

}  // namespace coemu::runner
