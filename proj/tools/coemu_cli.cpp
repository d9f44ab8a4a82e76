#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coemu/coemu.h"

namespace {

constexpr int kExitUsage = 2;

struct ConfigHandle {
  coemu_config* cfg = nullptr;
  ConfigHandle() {
    if (coemu_config_create(&cfg) != COEMU_OK) throw std::runtime_error(coemu_last_error());
  }
  ~ConfigHandle() { coemu_config_destroy(cfg); }
};

// Options shared by every subcommand: a config file and key=value overrides.
struct CommonOpts {
  std::string config_path;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "flat key=value config file");
  cmd->add_option("--set", o.sets, "override one config key (key=value), repeatable");
}

bool set(coemu_config* cfg, const std::string& key, const std::string& value) {
  if (coemu_config_set(cfg, key.c_str(), value.c_str()) != COEMU_OK) {
    std::cerr << "coemu: " << coemu_last_error() << "\n";
    return false;
  }
  return true;
}

bool apply_common(coemu_config* cfg, const CommonOpts& o) {
  if (!o.config_path.empty() && coemu_config_load(cfg, o.config_path.c_str()) != COEMU_OK) {
    std::cerr << "coemu: " << coemu_last_error() << "\n";
    return false;
  }
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "coemu: --set expects key=value, got '" << kv << "'\n";
      return false;
    }
    if (!set(cfg, kv.substr(0, eq), kv.substr(eq + 1))) return false;
  }
  return true;
}

// Flags that map one-to-one onto config keys; applied only when given.
struct RunOpts {
  std::optional<std::string> test, mode, transport, endpoint, out_dir;
  std::optional<std::uint64_t> seed, txns, frames, gate_factor;
  bool trace = false, wire_capture = false, pgm = false, quiet = false;
};

bool apply_run(coemu_config* cfg, const RunOpts& o) {
  const std::pair<const char*, const std::optional<std::string>*> strs[] = {
      {"test", &o.test}, {"mode", &o.mode}, {"transport", &o.transport}, {"endpoint", &o.endpoint},
      {"out_dir", &o.out_dir}};
  for (const auto& [k, v] : strs) {
    if (*v && !set(cfg, k, **v)) return false;
  }
  const std::pair<const char*, const std::optional<std::uint64_t>*> nums[] = {
      {"seed", &o.seed}, {"txns", &o.txns}, {"frames", &o.frames}, {"gate_factor", &o.gate_factor}};
  for (const auto& [k, v] : nums) {
    if (*v && !set(cfg, k, std::to_string(**v))) return false;
  }
  if (o.trace && !set(cfg, "trace", "1")) return false;
  if (o.wire_capture && !set(cfg, "wire_capture", "1")) return false;
  if (o.pgm && !set(cfg, "pgm_dump", "1")) return false;
  return true;
}

int cmd_run(const CommonOpts& common, const RunOpts& opts) {
  ConfigHandle h;
  if (!apply_common(h.cfg, common) || !apply_run(h.cfg, opts)) return kExitUsage;
  coemu_result* r = nullptr;
  if (coemu_run(h.cfg, &r) != COEMU_OK) {
    std::cerr << "coemu: " << coemu_last_error() << "\n";
    return kExitUsage;
  }
  std::cout << coemu_result_report(r);
  if (!opts.quiet) std::cout << coemu_result_coverage(r);
  const int rc = coemu_result_exit_code(r);
  coemu_result_destroy(r);
  return rc;
}

int cmd_bench(const CommonOpts& common, const RunOpts& opts, const std::vector<std::uint32_t>& matrix,
              const std::string& csv_path) {
  ConfigHandle h;
  // Register workload over real IPC unless told otherwise.
  if (!set(h.cfg, "test", "reg_random_rw") || !set(h.cfg, "transport", "socket") || !set(h.cfg, "txns", "10000")) {
    return kExitUsage;
  }
  if (!apply_common(h.cfg, common) || !apply_run(h.cfg, opts)) return kExitUsage;
  coemu_bench_result* b = nullptr;
  if (coemu_bench(h.cfg, matrix.data(), matrix.size(), &b) != COEMU_OK) {
    std::cerr << "coemu: " << coemu_last_error() << "\n";
    return kExitUsage;
  }
  std::cout << coemu_bench_table(b);
  if (csv_path.empty() || csv_path == "-") {
    std::cout << coemu_bench_csv(b);
  } else {
    std::ofstream out(csv_path);
    if (!out) {
      std::cerr << "coemu: cannot write " << csv_path << "\n";
      coemu_bench_destroy(b);
      return kExitUsage;
    }
    out << coemu_bench_csv(b);
  }
  const int rc = coemu_bench_valid(b) ? 0 : 1;
  coemu_bench_destroy(b);
  return rc;
}

int cmd_serve(const CommonOpts& common, const std::string& listen, bool once) {
  ConfigHandle h;
  if (!apply_common(h.cfg, common)) return kExitUsage;
  if (coemu_hdl_serve(h.cfg, listen.c_str(), once ? 1 : 0) != COEMU_OK) {
    std::cerr << "coemu: " << coemu_last_error() << "\n";
    return kExitUsage;
  }
  return 0;
}

void add_run_flags(CLI::App* cmd, RunOpts& o) {
  cmd->add_option("--test", o.test, "reg_smoke | reg_random_rw | isp_frames | subsystem_chain");
  cmd->add_option("--mode", o.mode, "lockstep | txn");
  cmd->add_option("--transport", o.transport, "inproc | socket");
  cmd->add_option("--endpoint", o.endpoint, "host:port of a running hdl-serve (socket transport)");
  cmd->add_option("--seed", o.seed, "stimulus seed");
  cmd->add_option("--txns", o.txns, "register transactions (reg_random_rw)");
  cmd->add_option("--frames", o.frames, "video frames (isp_frames, subsystem_chain)");
  cmd->add_option("--gate-factor", o.gate_factor, "busywork units per HDL cycle");
  cmd->add_option("--out-dir", o.out_dir, "directory for txn.log, coverage.txt, report.txt");
  cmd->add_flag("--trace", o.trace, "write the HDL signal trace (needs --out-dir)");
  cmd->add_flag("--wire-capture", o.wire_capture, "write every link message (needs --out-dir)");
  cmd->add_flag("--pgm", o.pgm, "dump output frames as 16-bit PGM (needs --out-dir)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transaction-level co-emulation test runner"};
  app.require_subcommand(1);

  CommonOpts run_common, bench_common, serve_common;
  RunOpts run_opts, bench_opts;

  auto* run = app.add_subcommand("run", "run one test");
  add_common(run, run_common);
  add_run_flags(run, run_opts);
  run->add_flag("--quiet", run_opts.quiet, "omit the coverage report");

  auto* bench = app.add_subcommand("bench", "lockstep vs transactional timing per gate factor");
  add_common(bench, bench_common);
  add_run_flags(bench, bench_opts);
  std::vector<std::uint32_t> matrix{0};
  std::string csv_path;
  bench->add_option("--matrix", matrix, "comma-separated gate factors")->delimiter(',');
  bench->add_option("--csv", csv_path, "write the CSV here instead of stdout");

  auto* serve = app.add_subcommand("hdl-serve", "serve the HDL side over TCP");
  add_common(serve, serve_common);
  std::string listen;
  bool once = false;
  serve->add_option("--listen", listen, "host:port to listen on")->required();
  serve->add_flag("--once", once, "exit after one session");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*run) return cmd_run(run_common, run_opts);
    if (*bench) return cmd_bench(bench_common, bench_opts, matrix, csv_path);
    if (*serve) return cmd_serve(serve_common, listen, once);
  } catch (const std::exception& e) {
    std::cerr << "coemu: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
