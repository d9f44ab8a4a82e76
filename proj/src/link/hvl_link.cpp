#include "link/hvl_link.hpp"

#include <limits>

#include "common/error.hpp"

namespace coemu::link {

namespace {
constexpr std::uint64_t kMaxLockstepTicks = std::uint64_t{1} << 24;
}

Link::Link(std::unique_ptr<Transport> transport, std::vector<PortDecl> ports, Options options)
    : transport_(std::move(transport)), ports_(std::move(ports)), options_(options) {
  if (!transport_) throw ConfigError("link needs a transport");
  if (options_.stream_depth == 0) throw ConfigError("stream depth must be >= 1");
  for (std::size_t i = 0; i < ports_.size(); ++i) {
    if (ports_[i].port_id == kControlPort) throw ConfigError("port id 0xFFFF is reserved");
    for (std::size_t j = 0; j < i; ++j) {
      if (ports_[i].port_id == ports_[j].port_id) {
        throw ConfigError("duplicate port id " + std::to_string(ports_[i].port_id));
      }
    }
  }
  pending_.push_back(Message{MsgType::kStreamIn, kControlPort, make_hello(options_.mode, topology_hash(ports_))});
}

Link::~Link() {
  if (!closed_) {
    try {
      transport_->close();
    } catch (...) {
    }
  }
}

const PortDecl& Link::port(std::uint16_t id) const {
  for (const auto& p : ports_) {
    if (p.port_id == id) return p;
  }
  throw UsageError("unknown port " + std::to_string(id));
}

void Link::require_open() const {
  if (closed_) throw TransportError("link is closed");
}

void Link::send_now(Message m) {
  pending_.push_back(std::move(m));
  flush_pending();
}

void Link::flush_pending() {
  if (pending_.empty()) return;
  if (options_.capture != nullptr) {
    for (const auto& m : pending_) options_.capture->record(WireCapture::Dir::kToHdl, m);
  }
  transport_->send(pending_);
  pending_.clear();
}

void Link::on_inbound(const Message& m) {
  if (options_.capture != nullptr) options_.capture->record(WireCapture::Dir::kToHvl, m);
  switch (m.type) {
    case MsgType::kStreamOut:
      if (m.port == kControlPort) {
        const Status s = parse_status(m.payload);
        if (s.kind == StatusKind::kFinalTime) {
          final_time_ = s.cycle;
        } else {
          closed_ = true;
          transport_->close();
          throw RemoteError(s.text, s.cycle);
        }
        return;
      }
      {
        const auto& p = port(m.port);
        if (p.direction != Direction::kHdlToHvl) throw ProtocolError("STREAM_OUT on an input port");
        check_payload(p, m.payload);
      }
      inbound_[m.port].push_back(m.payload);
      return;
    case MsgType::kXtfReturn:
      call_result_ = m.payload;
      return;
    case MsgType::kCycleAck:
    case MsgType::kShutdown:
      return;
    default:
      throw ProtocolError(std::string("unexpected ") + to_string(m.type) + " at HVL side");
  }
}

Message Link::pump(MsgType until) {
  for (;;) {
    Message m = transport_->receive();
    on_inbound(m);
    if (m.type == until) return m;
  }
}

void Link::fire_sync() {
  for (auto& fn : sync_hooks_) fn();
}

PackedBits Link::xtf_call(std::uint16_t port_id, const PackedBits& args) {
  require_open();
  if (in_directive_) throw UsageError("nested link directive");
  const auto& p = port(port_id);
  if (p.kind != PortKind::kReactive) throw UsageError("xtf_call on streaming port " + std::to_string(port_id));
  check_payload(p, args);
  in_directive_ = true;
  call_result_.reset();
  try {
    send_now(Message{MsgType::kXtfCall, port_id, args});
    if (options_.mode == LinkMode::kTransactional) {
      pump(MsgType::kXtfReturn);
    } else {
      for (std::uint64_t ticks = 0; !call_result_; ++ticks) {
        if (ticks >= kMaxLockstepTicks) throw ProtocolError("xtf call never returned");
        send_now(Message{MsgType::kCycleTick, 0, PackedBits{}});
        pump(MsgType::kCycleAck);
      }
    }
  } catch (...) {
    in_directive_ = false;
    throw;
  }
  in_directive_ = false;
  PackedBits result = std::move(*call_result_);
  call_result_.reset();
  check_payload(p, result, true);
  fire_sync();
  return result;
}

void Link::stream_send(std::uint16_t port_id, PackedBits payload) {
  require_open();
  const auto& p = port(port_id);
  if (p.kind != PortKind::kStreaming || p.direction != Direction::kHvlToHdl) {
    throw UsageError("stream_send on non-input port " + std::to_string(port_id));
  }
  check_payload(p, payload);
  if (pending_.size() >= options_.stream_depth) flush_pending();
  pending_.push_back(Message{MsgType::kStreamIn, port_id, std::move(payload)});
}

std::optional<PackedBits> Link::stream_recv_ready(std::uint16_t port_id) {
  const auto& p = port(port_id);
  if (p.kind != PortKind::kStreaming || p.direction != Direction::kHdlToHvl) {
    throw UsageError("stream_recv_ready on non-output port " + std::to_string(port_id));
  }
  auto it = inbound_.find(port_id);
  if (it == inbound_.end() || it->second.empty()) return std::nullopt;
  PackedBits v = std::move(it->second.front());
  it->second.pop_front();
  return v;
}

void Link::advance(std::uint64_t cycles) {
  require_open();
  if (in_directive_) throw UsageError("nested link directive");
  if (cycles == 0) return;
  in_directive_ = true;
  try {
    if (options_.mode == LinkMode::kLockstep) {
      for (std::uint64_t i = 0; i < cycles; ++i) {
        send_now(Message{MsgType::kCycleTick, 0, PackedBits{}});
        pump(MsgType::kCycleAck);
      }
    } else {
      std::uint64_t left = cycles;
      while (left > 0) {
        const std::uint64_t chunk = std::min<std::uint64_t>(left, std::numeric_limits<std::uint32_t>::max());
        send_now(Message{MsgType::kRunCycles, 0, PackedBits::from_u64(32, chunk)});
        pump(MsgType::kCycleAck);
        left -= chunk;
      }
    }
  } catch (...) {
    in_directive_ = false;
    throw;
  }
  in_directive_ = false;
  fire_sync();
}

std::uint64_t Link::shutdown() {
  if (closed_) return final_time_.value_or(0);
  if (in_directive_) throw UsageError("shutdown while a call is in flight");
  in_directive_ = true;
  try {
    send_now(Message{MsgType::kShutdown, 0, PackedBits{}});
    pump(MsgType::kShutdown);
  } catch (...) {
    in_directive_ = false;
    throw;
  }
  in_directive_ = false;
  closed_ = true;
  transport_->close();
  fire_sync();
  return final_time_.value_or(0);
}

}  // namespace coemu::link
