#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace coemu::hdl {

/// Elapsed posedges of the primary clock.
using SimTime = std::uint64_t;

struct SignalId {
  std::uint32_t index = 0;
  friend bool operator==(SignalId, SignalId) = default;
};

using ProcessId = std::uint32_t;

struct ClockGen {
  std::uint32_t period = 1;  // base time units per posedge
  bool enabled = true;
};

struct ResetGen {
  std::uint32_t assert_cycles = 4;
  bool active_low = false;
};

class Kernel;

/// Synchronous process: samples `current` values, schedules `next` values.
using ProcessFn = std::function<void(Kernel&)>;
/// Read-only sampler run after the commit of every cycle (monitors, task
/// completion detection). Observers may not write signals.
using ObserverFn = std::function<void(const Kernel&)>;

/// Deterministic single-clock, two-phase cycle kernel.
///
/// Each step evaluates every process in lexicographic order of its key
/// against the committed values, commits all scheduled writes at once,
/// advances time by one cycle, then runs observers in key order.
class Kernel {
 public:
  explicit Kernel(ResetGen reset = {}, ClockGen clock = {});

  Kernel(const Kernel&) = delete;
  Kernel& operator=(const Kernel&) = delete;

  SignalId add_signal(std::string name, unsigned width, std::uint64_t init = 0);
  SignalId find_signal(std::string_view name) const;
  const std::string& signal_name(SignalId id) const { return signals_.at(id.index).name; }
  unsigned signal_width(SignalId id) const { return signals_.at(id.index).width; }
  std::size_t signal_count() const noexcept { return signals_.size(); }

  std::uint64_t read(SignalId id) const { return signals_[id.index].current; }
  /// Schedules a value for the commit phase. Only legal inside a process.
  void write(SignalId id, std::uint64_t value);

  ProcessId register_process(std::string order_key, ProcessFn fn);
  ProcessId register_observer(std::string order_key, ObserverFn fn);

  SimTime step_cycle();
  SimTime run_cycles(std::uint64_t n);

  SimTime now() const noexcept { return cycle_; }
  std::uint64_t ticks() const noexcept { return cycle_ * clock_.period; }
  bool running() const noexcept { return started_; }

  SignalId reset_signal() const noexcept { return reset_id_; }
  bool in_reset() const noexcept { return cycle_ < reset_.assert_cycles; }

  /// Streams `cycle,signal_name,hex_value` for every committed change.
  void set_trace(std::ostream* out) { trace_ = out; }

  /// When armed, stepping outside a DirectiveScope is a simulation error.
  void require_directive(bool on) { require_directive_ = on; }
  class DirectiveScope {
   public:
    explicit DirectiveScope(Kernel& k) : k_(k) { ++k_.directive_depth_; }
    ~DirectiveScope() { --k_.directive_depth_; }
    DirectiveScope(const DirectiveScope&) = delete;
    DirectiveScope& operator=(const DirectiveScope&) = delete;

   private:
    Kernel& k_;
  };

 private:
  struct SignalState {
    std::string name;
    unsigned width;
    std::uint64_t current;
    std::uint64_t next;
    std::uint64_t written_epoch = 0;
    ProcessId writer = 0;
  };

  void commit();

  ResetGen reset_;
  ClockGen clock_;
  SimTime cycle_ = 0;
  std::uint64_t epoch_ = 0;  // step counter used to detect multiple drivers
  bool started_ = false;
  bool in_eval_ = false;
  ProcessId current_process_ = 0;
  bool require_directive_ = false;
  int directive_depth_ = 0;
  std::ostream* trace_ = nullptr;

  std::vector<SignalState> signals_;
  std::unordered_map<std::string, std::uint32_t> by_name_;
  std::vector<std::uint32_t> dirty_;
  std::map<std::string, ProcessFn> processes_;
  std::map<std::string, ObserverFn> observers_;
  std::vector<ProcessFn*> process_order_;
  std::vector<ObserverFn*> observer_order_;
  SignalId reset_id_;
};

}  // namespace coemu::hdl
