#include "runner/config.hpp"

#include <charconv>
#include <fstream>

#include "common/error.hpp"

namespace coemu::runner {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  int base = 10;
  std::string_view sv = v;
  if (sv.size() > 2 && sv[0] == '0' && (sv[1] == 'x' || sv[1] == 'X')) {
    base = 16;
    sv.remove_prefix(2);
  }
  auto [p, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), out, base);
  if (ec != std::errc{} || p != sv.data() + sv.size() || sv.empty()) {
    throw ConfigError("bad value for " + key + ": '" + v + "'");
  }
  return out;
}

std::uint32_t parse_u32(const std::string& key, const std::string& v) {
  const auto x = parse_u64(key, v);
  if (x > 0xFFFFFFFFull) throw ConfigError("value for " + key + " out of range: " + v);
  return static_cast<std::uint32_t>(x);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "off" || v == "no") return false;
  throw ConfigError("bad boolean for " + key + ": '" + v + "'");
}

}  // namespace

void EnvConfig::validate(DutKind dut) const {
  if (B > 0) throw ConfigError("memory interfaces (B=" + std::to_string(B) + ") are not supported");
  if (E < 1) throw ConfigError("at least one register interface (E) is required");
  if (R < 1) throw ConfigError("R must be at least 1");
  if (dut == DutKind::kRegFile) {
    if (M() != 0 || D != 0) throw ConfigError("the register-file DUT has no video or interrupt interfaces");
    return;
  }
  if (A != 1 || C != 1) throw ConfigError("the ISP subsystem has exactly one video input and output (A=1, C=1)");
  if (D > R) throw ConfigError("D must not exceed R (one interrupt line per IP)");
}

bool is_builtin_test(const std::string& name) {
  return name == "reg_smoke" || name == "reg_random_rw" || name == "isp_frames" || name == "subsystem_chain";
}

const char* to_string(TransportKind t) { return t == TransportKind::kSocket ? "socket" : "inproc"; }

const char* mode_name(link::LinkMode m) { return m == link::LinkMode::kLockstep ? "lockstep" : "txn"; }

void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string v = trim(raw_value);
  auto& h = cfg.hdl;
  if (key == "test") {
    cfg.test = v;
  } else if (key == "mode") {
    if (v == "lockstep") cfg.mode = link::LinkMode::kLockstep;
    else if (v == "txn" || v == "transactional") cfg.mode = link::LinkMode::kTransactional;
    else throw ConfigError("mode must be lockstep or txn, got '" + v + "'");
  } else if (key == "transport") {
    if (v == "inproc") cfg.transport = TransportKind::kInProc;
    else if (v == "socket") cfg.transport = TransportKind::kSocket;
    else throw ConfigError("transport must be inproc or socket, got '" + v + "'");
  } else if (key == "endpoint") {
    cfg.endpoint = v;
  } else if (key == "seed") {
    cfg.seed = parse_u64(key, v);
  } else if (key == "txns") {
    cfg.txns = parse_u64(key, v);
  } else if (key == "frames") {
    cfg.frames = parse_u64(key, v);
  } else if (key == "stream_depth") {
    cfg.stream_depth = parse_u32(key, v);
    if (cfg.stream_depth == 0) throw ConfigError("stream_depth must be positive");
  } else if (key == "out_dir") {
    cfg.out_dir = v;
  } else if (key == "trace") {
    cfg.trace = parse_bool(key, v);
  } else if (key == "wire_capture") {
    cfg.wire_capture = parse_bool(key, v);
  } else if (key == "pgm_dump") {
    cfg.pgm_dump = parse_bool(key, v);
  } else if (key == "dut") {
    if (v == "regfile") h.dut = DutKind::kRegFile;
    else if (v == "isp") h.dut = DutKind::kIsp;
    else throw ConfigError("dut must be regfile or isp, got '" + v + "'");
  } else if (key == "A") {
    h.env.A = parse_u32(key, v);
  } else if (key == "B") {
    h.env.B = parse_u32(key, v);
  } else if (key == "C") {
    h.env.C = parse_u32(key, v);
  } else if (key == "D") {
    h.env.D = parse_u32(key, v);
  } else if (key == "E") {
    h.env.E = parse_u32(key, v);
  } else if (key == "R") {
    h.env.R = parse_u32(key, v);
  } else if (key == "response_latency") {
    h.response_latency = parse_u32(key, v);
    if (h.response_latency == 0) throw ConfigError("response_latency must be at least 1");
  } else if (key == "pipeline_latency") {
    h.pipeline_latency = parse_u32(key, v);
    if (h.pipeline_latency == 0) throw ConfigError("pipeline_latency must be at least 1");
  } else if (key == "gate_factor") {
    h.gate_factor = parse_u32(key, v);
  } else if (key == "timeout") {
    h.timeout = parse_u32(key, v);
    if (h.timeout == 0) throw ConfigError("timeout must be positive");
  } else if (key == "reset_cycles") {
    h.reset_cycles = parse_u32(key, v);
  } else if (key == "reg_base") {
    h.reg_base = parse_u32(key, v);
    if (h.reg_base % 4 != 0) throw ConfigError("reg_base must be word aligned");
  } else if (key.rfind("reset.", 0) == 0) {
    h.isp_reset = dut::apply_reset_overrides(h.isp_reset, {{key.substr(6), parse_u32(key, v)}});
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
  cfg.explicit_keys[key] = v;
}

void load_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    }
    apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
}

void apply_test_defaults(RunConfig& cfg) {
  if (!is_builtin_test(cfg.test)) throw UsageError("unknown test '" + cfg.test + "'");
  const bool video = cfg.test == "isp_frames" || cfg.test == "subsystem_chain";
  auto set_default = [&](const char* key, auto assign) {
    if (!cfg.explicit_keys.count(key)) assign();
  };
  auto& h = cfg.hdl;
  set_default("dut", [&] { h.dut = video ? DutKind::kIsp : DutKind::kRegFile; });
  set_default("A", [&] { h.env.A = video ? 1 : 0; });
  set_default("C", [&] { h.env.C = video ? 1 : 0; });
  set_default("D", [&] { h.env.D = video ? 1 : 0; });
  set_default("R", [&] { h.env.R = cfg.test == "subsystem_chain" ? 3 : 1; });
  h.env.validate(h.dut);
}

}  // namespace coemu::runner
