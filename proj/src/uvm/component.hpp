#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "uvm/registry.hpp"
#include "uvm/report.hpp"

namespace coemu::uvm {

enum class Phase : std::uint8_t { kNone, kBuild, kConnect, kRun, kReport, kDone };

const char* to_string(Phase p);

/// Shared state of one environment: bindings, reporting, objections.
class Context {
 public:
  Context();

  BindingRegistry& registry() noexcept { return registry_; }
  Reporter& reporter() noexcept { return reporter_; }

  Phase phase() const noexcept { return phase_; }
  void raise_objection() { ++objections_; }
  void drop_objection();
  int objections() const noexcept { return objections_; }

  // Filled in by the environment for the summary line.
  std::uint64_t transactions = 0;
  std::uint64_t cycles = 0;

 private:
  friend struct PhaseRunner;
  BindingRegistry registry_;
  Reporter reporter_;
  Phase phase_ = Phase::kNone;
  int objections_ = 0;
};

class Component {
 public:
  /// Root constructor.
  Component(std::string name, Context& ctx);
  /// Child constructor; `parent` takes no ownership (see create()).
  Component(std::string name, Component& parent);
  virtual ~Component() = default;

  Component(const Component&) = delete;
  Component& operator=(const Component&) = delete;

  const std::string& name() const noexcept { return name_; }
  const std::string& full_path() const noexcept { return full_path_; }
  Component* parent() const noexcept { return parent_; }
  const std::vector<std::unique_ptr<Component>>& children() const noexcept { return children_; }

  template <class T, class... Args>
  T& create(std::string name, Args&&... args) {
    auto child = std::make_unique<T>(std::move(name), *this, std::forward<Args>(args)...);
    T& ref = *child;
    adopt(std::move(child));
    return ref;
  }

  Context& context() const noexcept { return ctx_; }
  BindingRegistry& registry() const noexcept { return ctx_.registry(); }
  Reporter& reporter() const noexcept { return ctx_.reporter(); }

  virtual void build_phase() {}
  virtual void connect_phase() {}
  virtual void run_phase() {}
  virtual void report_phase() {}

 private:
  void adopt(std::unique_ptr<Component> child);

  std::string name_;
  std::string full_path_;
  Component* parent_ = nullptr;
  Context& ctx_;
  std::vector<std::unique_ptr<Component>> children_;
};

struct ReportSummary {
  bool passed = false;
  bool run_entered = false;
  std::uint64_t errors = 0;  // errors + fatals
  std::uint64_t warnings = 0;
  std::uint64_t transactions = 0;
  std::uint64_t cycles = 0;
  Phase aborted_in = Phase::kNone;
  std::string fatal_message;

  /// `PASS|FAIL, errors=<n>, transactions=<n>, cycles=<n>`
  std::string line() const;
};

/// BUILD (top-down, children created during build are built too), CONNECT
/// (bottom-up), RUN (pre-order; ends when objections are back to zero),
/// REPORT. A fatal aborts the remaining phases.
ReportSummary run_phases(Component& root);

}  // namespace coemu::uvm
