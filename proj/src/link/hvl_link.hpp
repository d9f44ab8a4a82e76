#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "link/message.hpp"
#include "link/transport.hpp"

namespace coemu::link {

/// The HVL side of the transaction link.
///
/// Untimed: the only operations that let the HDL clock move are xtf_call()
/// and advance(). HDL->HVL stream traffic is buffered per port and becomes
/// visible after each directive, at which point on_sync() callbacks fire.
class Link {
 public:
  struct Options {
    LinkMode mode = LinkMode::kTransactional;
    std::size_t stream_depth = kDefaultStreamDepth;
    WireCapture* capture = nullptr;
  };

  Link(std::unique_ptr<Transport> transport, std::vector<PortDecl> ports, Options options);
  ~Link();

  Link(const Link&) = delete;
  Link& operator=(const Link&) = delete;

  /// Blocking remote task call on a reactive port.
  PackedBits xtf_call(std::uint16_t port, const PackedBits& args);
  /// Queues a payload for an HVL->HDL streaming port. Does not block unless
  /// `stream_depth` messages are already queued, in which case the queue is
  /// pushed onto the transport first.
  void stream_send(std::uint16_t port, PackedBits payload);
  /// Next delivered payload on an HDL->HVL streaming port, if any.
  std::optional<PackedBits> stream_recv_ready(std::uint16_t port);
  /// Lets the HDL clock run for `cycles` cycles.
  void advance(std::uint64_t cycles);
  /// Ends the session. Idempotent; returns the HDL side's final time.
  std::uint64_t shutdown();

  void on_sync(std::function<void()> fn) { sync_hooks_.push_back(std::move(fn)); }

  LinkMode mode() const noexcept { return options_.mode; }
  bool closed() const noexcept { return closed_; }
  std::optional<std::uint64_t> final_time() const noexcept { return final_time_; }
  const PortDecl& port(std::uint16_t id) const;
  const std::vector<PortDecl>& ports() const noexcept { return ports_; }

 private:
  void send_now(Message m);
  void flush_pending();
  /// Receives until a message of `until` arrives; returns it.
  Message pump(MsgType until);
  void on_inbound(const Message& m);
  void fire_sync();
  void require_open() const;

  std::unique_ptr<Transport> transport_;
  std::vector<PortDecl> ports_;
  Options options_;
  std::vector<Message> pending_;
  std::map<std::uint16_t, std::deque<PackedBits>> inbound_;
  std::vector<std::function<void()>> sync_hooks_;
  std::optional<PackedBits> call_result_;
  std::optional<std::uint64_t> final_time_;
  bool closed_ = false;
  bool in_directive_ = false;
};

}  // namespace coemu::link
