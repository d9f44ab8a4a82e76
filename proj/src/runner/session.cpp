#include "runner/session.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <fstream>
#include <ostream>

#include "common/error.hpp"
#include "link/hvl_link.hpp"
#include "link/inproc.hpp"
#include "link/socket.hpp"
#include "runner/hdl_topology.hpp"
#include "runner/ports.hpp"

namespace coemu::runner {

namespace {

// Owns whatever sits on the far side of the link for one run.
struct HdlSide {
  std::unique_ptr<HdlTopology> inproc;
  pid_t child = -1;

  int reap() {
    if (child <= 0) return 0;
    int status = 0;
    while (::waitpid(child, &status, 0) < 0 && errno == EINTR) {
    }
    child = -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : 128;
  }
  ~HdlSide() { reap(); }
};

std::unique_ptr<link::Transport> open_transport(const RunConfig& cfg, HdlSide& side) {
  if (cfg.transport == TransportKind::kInProc) {
    side.inproc = std::make_unique<HdlTopology>(cfg.hdl);
    return std::make_unique<link::InProcTransport>(side.inproc->endpoint());
  }
  if (!cfg.endpoint.empty()) return link::SocketTransport::connect(cfg.endpoint);

  link::Fd listener = link::listen_tcp({"127.0.0.1", 0});
  const std::uint16_t port = link::bound_port(listener);
  const pid_t pid = ::fork();
  if (pid < 0) throw TransportError("fork failed");
  if (pid == 0) {
    int rc = 0;
    try {
      link::Fd conn = link::accept_one(listener);
      listener.reset();
      HdlTopology topo(cfg.hdl);
      link::serve_connection(conn.get(), topo.endpoint());
      rc = topo.endpoint().failed() ? 1 : 0;
    } catch (...) {
      rc = 3;
    }
    ::_exit(rc);
  }
  side.child = pid;
  listener.reset();
  return link::SocketTransport::connect("127.0.0.1:" + std::to_string(port));
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kConfig:
    case ErrorKind::kUsage:
    case ErrorKind::kTransport:
    case ErrorKind::kFraming:
      return kExitUsage;
    default:
      return kExitMismatch;
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

}  // namespace

std::string RunResult::report() const {
  std::string out = summary.line() + "\n";
  for (const auto& m : messages) {
    if (m.rfind("ERROR", 0) == 0 || m.rfind("FATAL", 0) == 0) out += m + "\n";
  }
  if (!error.empty()) out += "ABORTED " + error + "\n";
  return out;
}

RunResult run_with_body(const RunConfig& cfg, TestBody body) {
  cfg.hdl.env.validate(cfg.hdl.dut);
  const auto ports = topology_ports(cfg.hdl);

  RunResult result;
  link::WireCapture capture(cfg.wire_capture);
  HdlSide side;
  uvm::Context ctx;
  std::unique_ptr<link::Link> lnk;
  std::unique_ptr<TestTop> top;
  try {
    auto transport = open_transport(cfg, side);
    link::Link::Options opts;
    opts.mode = cfg.mode;
    opts.stream_depth = cfg.stream_depth;
    opts.capture = &capture;
    lnk = std::make_unique<link::Link>(std::move(transport), ports, opts);
    bind_topology(ctx.registry(), *lnk, cfg.hdl);
    top = std::make_unique<TestTop>(ctx, cfg, *lnk, std::move(body));

    const auto t0 = std::chrono::steady_clock::now();
    result.summary = uvm::run_phases(*top);
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!result.summary.passed) {
      const bool elaboration = result.summary.aborted_in == uvm::Phase::kBuild ||
                               result.summary.aborted_in == uvm::Phase::kConnect;
      result.exit_code = elaboration ? kExitUsage : kExitMismatch;
    }
  } catch (const Error& e) {
    result.error = e.what();
    result.exit_code = exit_code_for(e);
  } catch (const std::exception& e) {
    result.error = e.what();
    result.exit_code = kExitMismatch;
  }
  if (!result.error.empty()) {
    result.summary.passed = false;
    result.summary.errors = ctx.reporter().count(uvm::Severity::kError) +
                            ctx.reporter().count(uvm::Severity::kFatal) + 1;
    result.summary.cycles = ctx.cycles;
    result.summary.transactions = ctx.transactions;
  }

  if (top) {
    result.txn_log = top->env().txn_log();
    result.coverage = top->env().coverage();
    result.frames_out = top->output_frames().size();
    if (cfg.pgm_dump && !cfg.out_dir.empty()) {
      std::filesystem::create_directories(cfg.out_dir / "frames");
      for (const auto& f : top->output_frames()) {
        write_pgm(cfg.out_dir / "frames" / ("out_" + std::to_string(f.frame_id) + ".pgm"), f);
      }
    }
  }
  result.messages = ctx.reporter().messages();
  result.cycles = result.summary.cycles;
  result.transactions = result.summary.transactions;
  for (std::size_t t = 0; t < result.wire_counts.size(); ++t) {
    result.wire_counts[t] = capture.count(static_cast<link::MsgType>(t));
  }
  result.wire_total = capture.total();

  // Closing the link lets a forked HDL process see EOF before we wait on it.
  top.reset();
  lnk.reset();
  const int child_rc = side.reap();
  if (child_rc != 0 && result.exit_code == kExitPass) {
    result.exit_code = kExitMismatch;
    result.error = "HDL process exited with status " + std::to_string(child_rc);
  }

  if (!cfg.out_dir.empty() && cfg.wire_capture) {
    std::ofstream out(cfg.out_dir / "wire.txt");
    capture.write(out);
  }
  return result;
}

RunResult run_test(const RunConfig& in) {
  RunConfig cfg = in;
  apply_test_defaults(cfg);
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    if (cfg.trace) cfg.hdl.trace_path = cfg.out_dir / "trace.csv";
  }
  RunResult r = run_with_body(cfg, builtin_test(cfg.test));
  if (!cfg.out_dir.empty()) {
    std::string log;
    for (const auto& l : r.txn_log) log += l + "\n";
    write_text(cfg.out_dir / "txn.log", log);
    write_text(cfg.out_dir / "coverage.txt", r.coverage.report());
    write_text(cfg.out_dir / "report.txt", r.report());
  }
  return r;
}

void serve_hdl(const HdlConfig& cfg, const std::string& listen, bool once, std::ostream* log,
               const std::function<void(std::uint16_t)>& on_listening) {
  cfg.env.validate(cfg.dut);
  link::Fd listener = link::listen_tcp(link::parse_endpoint(listen));
  const auto port = link::bound_port(listener);
  if (log) *log << "hdl-serve listening on port " << port << std::endl;
  if (on_listening) on_listening(port);
  do {
    link::Fd conn = link::accept_one(listener);
    HdlTopology topo(cfg);
    link::serve_connection(conn.get(), topo.endpoint());
    if (log) {
      *log << "session ended at cycle " << topo.kernel().now();
      if (topo.endpoint().failed()) *log << " with error: " << topo.endpoint().failure();
      *log << std::endl;
    }
  } while (!once);
}

void write_pgm(const std::filesystem::path& path, const codec::FrameTxn& frame) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "P5\n" << frame.width << ' ' << frame.height << "\n65535\n";
  for (auto px : frame.pixels) {
    const char be[2] = {static_cast<char>(px >> 8), static_cast<char>(px & 0xFF)};
    out.write(be, 2);
  }
}

}  // namespace coemu::runner
