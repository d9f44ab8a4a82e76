#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "dut/isp_regs.hpp"
#include "link/message.hpp"

namespace coemu::runner {

enum class TransportKind : std::uint8_t { kInProc, kSocket };
enum class DutKind : std::uint8_t { kRegFile, kIsp };

/// Interface counts of the verification environment.
struct EnvConfig {
  std::uint32_t A = 0;  // input video interfaces
  std::uint32_t B = 0;  // memory interfaces; unsupported, must stay 0
  std::uint32_t C = 0;  // output video interfaces
  std::uint32_t D = 0;  // interrupt lines
  std::uint32_t E = 1;  // register interfaces
  std::uint32_t R = 1;  // chained IPs

  std::uint32_t M() const noexcept { return A > C ? A : C; }
  /// Throws ConfigError when the counts cannot be built.
  void validate(DutKind dut) const;
};

/// Everything the HDL side needs to elaborate its half of the topology.
struct HdlConfig {
  DutKind dut = DutKind::kRegFile;
  EnvConfig env;
  std::uint32_t response_latency = 2;
  std::uint32_t pipeline_latency = 4;
  std::uint32_t gate_factor = 0;
  std::uint32_t timeout = 64;
  std::uint32_t reset_cycles = 4;
  std::uint32_t reg_base = 0;
  dut::IspConfig isp_reset;
  std::filesystem::path trace_path;  // empty: no signal trace
};

struct RunConfig {
  std::string test = "reg_smoke";
  link::LinkMode mode = link::LinkMode::kTransactional;
  TransportKind transport = TransportKind::kInProc;
  std::string endpoint;  // socket: connect here instead of spawning an HDL process
  std::uint64_t seed = 1;
  std::uint64_t txns = 1000;
  std::uint64_t frames = 8;
  std::size_t stream_depth = link::kDefaultStreamDepth;
  std::filesystem::path out_dir;  // empty: no artifacts
  bool trace = false;
  bool wire_capture = false;
  bool pgm_dump = false;
  HdlConfig hdl;

  // Which keys were set explicitly; test defaults fill in the rest.
  std::map<std::string, std::string> explicit_keys;
};

/// Applies one `key=value` setting. Unknown keys and bad values throw ConfigError.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);
/// Reads a flat key=value file; `#` starts a comment.
void load_config_file(RunConfig& cfg, const std::filesystem::path& path);
/// Fills in topology defaults for the named test; unknown name throws UsageError.
void apply_test_defaults(RunConfig& cfg);

bool is_builtin_test(const std::string& name);
const char* to_string(TransportKind t);
const char* mode_name(link::LinkMode m);

/// Stimulus generator: xorshift64* (shifts 12, 25, 27; multiplier
/// 0x2545F4914F6CDD1D). Seed 0 is replaced by a fixed nonzero constant.
class Prng {
 public:
  explicit Prng(std::uint64_t seed) : state_(seed ? seed : 0x9E3779B97F4A7C15ull) {}

  std::uint64_t next() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1Dull;
  }
  /// Uniform in [0, n) by 128-bit multiply-high; n == 0 yields 0.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
  }
  std::uint64_t range(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
  /// True with probability num/den.
  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

 private:
  std::uint64_t state_;
};

}  // namespace coemu::runner
