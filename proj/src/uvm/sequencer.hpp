#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>

#include "common/error.hpp"
#include "uvm/component.hpp"

namespace coemu::uvm {

/// Sequencer/driver handshake for one agent.
///
/// Items come from push() (one-shot) or from started sequences, which are
/// generators pulled on demand. get_next_item() hands out one item at a time;
/// item_done() must follow before the next one. With the queue empty and no
/// objection raised, get_next_item() returns nullopt: end of test.
template <class Req, class Rsp = Req>
class Sequencer : public Component {
 public:
  using Generator = std::function<std::optional<Req>()>;

  Sequencer(std::string name, Component& parent) : Component(std::move(name), parent) {}

  void push(Req item) { pending_.push_back(std::move(item)); }
  void start_sequence(Generator gen) { sequences_.push_back(std::move(gen)); }

  /// Installed by the driver: performs one get_next_item/drive/item_done cycle.
  void set_driver(std::function<void()> drive_one) { drive_one_ = std::move(drive_one); }

  std::optional<Req> get_next_item() {
    if (in_flight_) throw ProtocolError(full_path() + ": get_next_item while an item is in flight");
    if (pending_.empty()) {
      if (context().objections() == 0) return std::nullopt;
      while (pending_.empty() && !sequences_.empty()) {
        if (auto item = sequences_.front()()) {
          pending_.push_back(std::move(*item));
        } else {
          sequences_.pop_front();
        }
      }
      if (pending_.empty()) {
        throw ProtocolError(full_path() + ": get_next_item would block forever (objection raised, no producer)");
      }
    }
    in_flight_ = std::move(pending_.front());
    pending_.pop_front();
    ++get_count_;
    return in_flight_;
  }

  void item_done(Rsp response) {
    if (!in_flight_) throw ProtocolError(full_path() + ": item_done without an item in flight");
    in_flight_.reset();
    ++done_count_;
    last_response_ = std::move(response);
    if (on_done_) on_done_(*last_response_);
  }

  /// Runs one item to completion through the installed driver and returns
  /// its response (register-model style blocking access).
  Rsp execute(Req item) {
    if (!drive_one_) throw ConfigError(full_path() + ": no driver connected");
    if (in_flight_ || !pending_.empty()) throw ProtocolError(full_path() + ": execute with items outstanding");
    const std::uint64_t target = done_count_ + 1;
    pending_.push_back(std::move(item));
    context().raise_objection();
    try {
      while (done_count_ < target) drive_one_();
    } catch (...) {
      context().drop_objection();
      throw;
    }
    context().drop_objection();
    return *last_response_;
  }

  void on_item_done(std::function<void(const Rsp&)> fn) { on_done_ = std::move(fn); }

  std::size_t pending() const noexcept { return pending_.size(); }
  bool has_in_flight() const noexcept { return in_flight_.has_value(); }
  std::uint64_t get_count() const noexcept { return get_count_; }
  std::uint64_t done_count() const noexcept { return done_count_; }

 private:
  std::deque<Req> pending_;
  std::deque<Generator> sequences_;
  std::optional<Req> in_flight_;
  std::optional<Rsp> last_response_;
  std::function<void()> drive_one_;
  std::function<void(const Rsp&)> on_done_;
  std::uint64_t get_count_ = 0;
  std::uint64_t done_count_ = 0;
};

}  // namespace coemu::uvm
