#include "hdl/kernel.hpp"

#include <algorithm>
#include <cstdio>

#include "common/error.hpp"

namespace coemu::hdl {

Kernel::Kernel(ResetGen reset, ClockGen clock) : reset_(reset), clock_(clock) {
  if (clock_.period < 1) throw ConfigError("clock period must be >= 1");
  const std::uint64_t asserted = reset_.active_low ? 0 : 1;
  const std::uint64_t init = reset_.assert_cycles > 0 ? asserted : asserted ^ 1u;
  reset_id_ = add_signal("rst", 1, init);
}

SignalId Kernel::add_signal(std::string name, unsigned width, std::uint64_t init) {
  if (started_) throw ConfigError("cannot add signal '" + name + "' after the kernel started");
  if (width < 1 || width > 64) throw ConfigError("signal '" + name + "' width must be 1..64");
  if (width < 64 && (init >> width) != 0) throw ConfigError("initial value of '" + name + "' exceeds width");
  if (by_name_.contains(name)) throw ConfigError("duplicate signal '" + name + "'");
  const auto idx = static_cast<std::uint32_t>(signals_.size());
  by_name_.emplace(name, idx);
  signals_.push_back({std::move(name), width, init, init});
  return SignalId{idx};
}

SignalId Kernel::find_signal(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) throw ConfigError("unknown signal '" + std::string(name) + "'");
  return SignalId{it->second};
}

void Kernel::write(SignalId id, std::uint64_t value) {
  if (!in_eval_) throw SimulationError("signal write outside process evaluation", cycle_);
  auto& s = signals_.at(id.index);
  if (s.width < 64 && (value >> s.width) != 0) {
    throw SimulationError("value exceeds width of '" + s.name + "'", cycle_);
  }
  if (s.written_epoch == epoch_) {
    if (s.writer != current_process_) throw SimulationError("multiple drivers on '" + s.name + "'", cycle_);
  } else {
    s.written_epoch = epoch_;
    s.writer = current_process_;
    dirty_.push_back(id.index);
  }
  s.next = value;
}

ProcessId Kernel::register_process(std::string order_key, ProcessFn fn) {
  if (started_) throw ConfigError("cannot register process '" + order_key + "' after the kernel started");
  if (processes_.contains(order_key)) throw ConfigError("duplicate process key '" + order_key + "'");
  processes_.emplace(std::move(order_key), std::move(fn));
  return static_cast<ProcessId>(processes_.size());
}

ProcessId Kernel::register_observer(std::string order_key, ObserverFn fn) {
  if (started_) throw ConfigError("cannot register observer '" + order_key + "' after the kernel started");
  if (observers_.contains(order_key)) throw ConfigError("duplicate observer key '" + order_key + "'");
  observers_.emplace(std::move(order_key), std::move(fn));
  return static_cast<ProcessId>(observers_.size());
}

SimTime Kernel::step_cycle() {
  if (!clock_.enabled) throw SimulationError("primary clock is disabled", cycle_);
  if (require_directive_ && directive_depth_ == 0) {
    throw SimulationError("time advanced outside a link directive", cycle_);
  }
  if (!started_) {
    started_ = true;
    for (auto& [key, fn] : processes_) process_order_.push_back(&fn);
    for (auto& [key, fn] : observers_) observer_order_.push_back(&fn);
  }
  ++epoch_;
  in_eval_ = true;
  try {
    for (std::size_t i = 0; i < process_order_.size(); ++i) {
      current_process_ = static_cast<ProcessId>(i + 1);
      (*process_order_[i])(*this);
    }
  } catch (const SimulationError&) {
    in_eval_ = false;
    throw;
  } catch (const std::exception& e) {
    in_eval_ = false;
    throw SimulationError(std::string("process fault: ") + e.what(), cycle_);
  }
  in_eval_ = false;
  commit();
  try {
    for (auto* obs : observer_order_) (*obs)(*this);
  } catch (const SimulationError&) {
    throw;
  } catch (const std::exception& e) {
    throw SimulationError(std::string("observer fault: ") + e.what(), cycle_);
  }
  return cycle_;
}

SimTime Kernel::run_cycles(std::uint64_t n) {
  for (std::uint64_t i = 0; i < n; ++i) step_cycle();
  return cycle_;
}

void Kernel::commit() {
  ++cycle_;
  // Reset generator drives rst directly as part of the commit.
  {
    auto& rst = signals_[reset_id_.index];
    const std::uint64_t asserted = reset_.active_low ? 0 : 1;
    const std::uint64_t v = in_reset() ? asserted : asserted ^ 1u;
    if (rst.written_epoch != epoch_) {
      rst.written_epoch = epoch_;
      dirty_.push_back(reset_id_.index);
    }
    rst.next = v;
  }
  std::sort(dirty_.begin(), dirty_.end());
  for (auto idx : dirty_) {
    auto& s = signals_[idx];
    if (s.next == s.current) continue;
    s.current = s.next;
    if (trace_ != nullptr) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%llx", static_cast<unsigned long long>(s.current));
      *trace_ << cycle_ << ',' << s.name << ',' << buf << '\n';
    }
  }
  dirty_.clear();
}

}  // namespace coemu::hdl
