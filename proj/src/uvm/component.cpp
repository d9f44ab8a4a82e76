#include "uvm/component.hpp"

#include "common/error.hpp"

namespace coemu::uvm {

const char* to_string(Phase p) {
  switch (p) {
    case Phase::kNone: return "none";
    case Phase::kBuild: return "build";
    case Phase::kConnect: return "connect";
    case Phase::kRun: return "run";
    case Phase::kReport: return "report";
    case Phase::kDone: return "done";
  }
  return "?";
}

Context::Context() {
  registry_.set_warning_sink([this](const std::string& msg) { reporter_.warning("REGISTRY", msg); });
}

void Context::drop_objection() {
  if (objections_ == 0) throw ProtocolError("drop_objection with no objection raised");
  --objections_;
}

Component::Component(std::string name, Context& ctx) : name_(std::move(name)), full_path_(name_), ctx_(ctx) {
  if (name_.empty()) throw ConfigError("component name must be non-empty");
}

Component::Component(std::string name, Component& parent)
    : name_(std::move(name)), full_path_(parent.full_path() + "." + name_), parent_(&parent), ctx_(parent.ctx_) {
  if (name_.empty() || name_.find('.') != std::string::npos) {
    throw ConfigError("invalid component name '" + name_ + "'");
  }
}

void Component::adopt(std::unique_ptr<Component> child) {
  for (const auto& c : children_) {
    if (c->name() == child->name()) throw ConfigError("duplicate component path " + child->full_path());
  }
  children_.push_back(std::move(child));
}

std::string ReportSummary::line() const {
  return std::string(passed ? "PASS" : "FAIL") + ", errors=" + std::to_string(errors) +
         ", transactions=" + std::to_string(transactions) + ", cycles=" + std::to_string(cycles);
}

struct PhaseRunner {
  static void set(Context& ctx, Phase p) { ctx.phase_ = p; }

  static void build(Component& c) {
    c.build_phase();
    // Children may be created by build_phase; index loop tolerates growth.
    for (std::size_t i = 0; i < c.children().size(); ++i) build(*c.children()[i]);
  }
  static void connect(Component& c) {
    for (const auto& child : c.children()) connect(*child);
    c.connect_phase();
  }
  static void run(Component& c) {
    c.run_phase();
    for (const auto& child : c.children()) run(*child);
  }
  static void report(Component& c) {
    for (const auto& child : c.children()) report(*child);
    c.report_phase();
  }
};

ReportSummary run_phases(Component& root) {
  Context& ctx = root.context();
  ReportSummary summary;
  Phase current = Phase::kBuild;
  try {
    PhaseRunner::set(ctx, Phase::kBuild);
    PhaseRunner::build(root);
    ctx.registry().close();

    current = Phase::kConnect;
    PhaseRunner::set(ctx, Phase::kConnect);
    PhaseRunner::connect(root);

    current = Phase::kRun;
    PhaseRunner::set(ctx, Phase::kRun);
    summary.run_entered = true;
    PhaseRunner::run(root);
    if (ctx.objections() != 0) {
      ctx.reporter().error("OBJECTION", std::to_string(ctx.objections()) + " objection(s) still raised at end of run");
    }

    current = Phase::kReport;
    PhaseRunner::set(ctx, Phase::kReport);
    PhaseRunner::report(root);
    PhaseRunner::set(ctx, Phase::kDone);
  } catch (const FatalError& e) {
    summary.aborted_in = current;
    summary.fatal_message = e.what();
    // Fatals raised directly (not via Reporter::fatal) still count.
    if (ctx.reporter().count(Severity::kFatal) == 0) {
      try {
        ctx.reporter().fatal("FATAL", e.what());
      } catch (const FatalError&) {
      }
    }
  }
  summary.errors = ctx.reporter().count(Severity::kError) + ctx.reporter().count(Severity::kFatal);
  summary.warnings = ctx.reporter().count(Severity::kWarning);
  summary.transactions = ctx.transactions;
  summary.cycles = ctx.cycles;
  summary.passed = summary.errors == 0 && summary.aborted_in == Phase::kNone;
  return summary;
}

}  // namespace coemu::uvm
