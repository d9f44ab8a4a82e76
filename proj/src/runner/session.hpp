#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "runner/config.hpp"
#include "runner/coverage.hpp"
#include "runner/env.hpp"
#include "uvm/component.hpp"

namespace coemu::runner {

inline constexpr int kExitPass = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitUsage = 2;

struct RunResult {
  int exit_code = kExitPass;
  uvm::ReportSummary summary;
  std::string error;  // set when the run stopped on an exception
  CoverageDb coverage;
  std::vector<std::string> txn_log;
  std::vector<std::string> messages;
  std::uint64_t cycles = 0;
  std::uint64_t transactions = 0;
  std::uint64_t frames_out = 0;
  double wall_seconds = 0;  // BUILD through REPORT, excluding HDL process startup
  std::array<std::uint64_t, 8> wire_counts{};
  std::uint64_t wire_total = 0;

  /// Contents of report.txt: the summary line, then any error messages.
  std::string report() const;
};

/// Runs a built-in test. Usage and configuration errors throw; failures
/// during the run are reported through the result.
RunResult run_test(const RunConfig& cfg);

/// Runs `body` on the topology in `cfg.hdl` exactly as given (no test defaults).
RunResult run_with_body(const RunConfig& cfg, TestBody body);

/// Serves HVL sessions on `listen` (host:port). With `once`, returns after the first.
/// `on_listening` receives the bound port before the first accept.
void serve_hdl(const HdlConfig& cfg, const std::string& listen, bool once, std::ostream* log,
               const std::function<void(std::uint16_t)>& on_listening = {});

/// Writes a 16-bit binary PGM.
void write_pgm(const std::filesystem::path& path, const codec::FrameTxn& frame);

}  // namespace coemu::runner
