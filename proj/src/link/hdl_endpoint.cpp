#include "link/hdl_endpoint.hpp"

#include "common/error.hpp"

namespace coemu::link {

PackedBits StreamInQueue::pop() {
  PackedBits v = std::move(q_.front());
  q_.pop_front();
  return v;
}

void StreamOut::emit(PackedBits payload) const {
  if (ep_ == nullptr) throw ConfigError("stream output not declared");
  check_payload(port_, payload);
  ep_->outbox_.push_back(Message{MsgType::kStreamOut, port_.port_id, std::move(payload)});
}

HdlEndpoint::HdlEndpoint(hdl::Kernel& kernel) : kernel_(kernel) { kernel_.require_directive(true); }

void HdlEndpoint::bind_task(const PortDecl& p, XtfTask& task) {
  if (p.kind != PortKind::kReactive || p.direction != Direction::kHvlToHdl) {
    throw ConfigError("tasks bind only to reactive HVL->HDL ports");
  }
  for (const auto& existing : ports_) {
    if (existing.port_id == p.port_id) throw ConfigError("duplicate port id " + std::to_string(p.port_id));
  }
  ports_.push_back(p);
  tasks_[p.port_id] = &task;
}

StreamInQueue& HdlEndpoint::declare_stream_in(const PortDecl& p) {
  if (p.kind != PortKind::kStreaming || p.direction != Direction::kHvlToHdl) {
    throw ConfigError("stream input must be a streaming HVL->HDL port");
  }
  for (const auto& existing : ports_) {
    if (existing.port_id == p.port_id) throw ConfigError("duplicate port id " + std::to_string(p.port_id));
  }
  ports_.push_back(p);
  return stream_in_[p.port_id];
}

StreamOut HdlEndpoint::declare_stream_out(const PortDecl& p) {
  if (p.kind != PortKind::kStreaming || p.direction != Direction::kHdlToHvl) {
    throw ConfigError("stream output must be a streaming HDL->HVL port");
  }
  for (const auto& existing : ports_) {
    if (existing.port_id == p.port_id) throw ConfigError("duplicate port id " + std::to_string(p.port_id));
  }
  ports_.push_back(p);
  return StreamOut(this, p);
}

const PortDecl& HdlEndpoint::port(std::uint16_t id) const {
  for (const auto& p : ports_) {
    if (p.port_id == id) return p;
  }
  throw ProtocolError("unknown port " + std::to_string(id));
}

void HdlEndpoint::handle(const Message& m, std::vector<Message>& out) {
  if (finished_) throw ProtocolError("message after session end");
  try {
    dispatch(m, out);
  } catch (const std::exception& e) {
    failed_ = true;
    finished_ = true;
    failure_ = e.what();
    const auto* sim = dynamic_cast<const SimulationError*>(&e);
    const std::uint64_t cycle = sim != nullptr ? sim->cycle() : kernel_.now();
    outbox_.clear();
    out.push_back(Message{MsgType::kStreamOut, kControlPort, make_status(StatusKind::kError, cycle, e.what())});
  }
}

void HdlEndpoint::step(std::uint64_t n) {
  hdl::Kernel::DirectiveScope scope(kernel_);
  kernel_.run_cycles(n);
}

void HdlEndpoint::flush(std::vector<Message>& out) {
  for (auto& m : outbox_) out.push_back(std::move(m));
  outbox_.clear();
}

void HdlEndpoint::dispatch(const Message& m, std::vector<Message>& out) {
  if (!hello_seen_) {
    if (m.type != MsgType::kStreamIn || m.port != kControlPort) {
      throw ProtocolError("expected session hello, got " + std::string(to_string(m.type)));
    }
    const auto [mode, hash] = parse_hello(m.payload);
    if (hash != topology_hash(ports_)) throw ProtocolError("port table mismatch between HVL and HDL sides");
    mode_ = mode;
    hello_seen_ = true;
    return;
  }

  switch (m.type) {
    case MsgType::kStreamIn: {
      const auto& p = port(m.port);
      if (p.kind != PortKind::kStreaming || p.direction != Direction::kHvlToHdl) {
        throw ProtocolError("STREAM_IN on non-input port " + std::to_string(m.port));
      }
      check_payload(p, m.payload);
      stream_in_[m.port].q_.push_back(m.payload);
      return;
    }
    case MsgType::kXtfCall: {
      const auto& p = port(m.port);
      if (p.kind != PortKind::kReactive) throw ProtocolError("XTF_CALL on streaming port " + std::to_string(m.port));
      check_payload(p, m.payload);
      if (active_task_ != nullptr) throw ProtocolError("XTF_CALL while another call is in flight");
      active_task_ = tasks_.at(m.port);
      active_port_ = m.port;
      active_task_->start(m.payload);
      if (mode_ == LinkMode::kTransactional) {
        std::uint64_t spent = 0;
        while (!active_task_->done()) {
          if (++spent > kMaxTaskCycles) throw SimulationError("xtf task did not complete", kernel_.now());
          step(1);
        }
        flush(out);
        auto result = active_task_->take_result();
        check_payload(p, result, true);
        out.push_back(Message{MsgType::kXtfReturn, m.port, std::move(result)});
        active_task_ = nullptr;
      }
      return;
    }
    case MsgType::kCycleTick: {
      if (mode_ != LinkMode::kLockstep) throw ProtocolError("CYCLE_TICK in transactional mode");
      step(1);
      flush(out);
      if (active_task_ != nullptr && active_task_->done()) {
        auto result = active_task_->take_result();
        check_payload(port(active_port_), result, true);
        out.push_back(Message{MsgType::kXtfReturn, active_port_, std::move(result)});
        active_task_ = nullptr;
      }
      out.push_back(Message{MsgType::kCycleAck, 0, PackedBits{}});
      return;
    }
    case MsgType::kRunCycles: {
      if (mode_ != LinkMode::kTransactional) throw ProtocolError("RUN_CYCLES in lockstep mode");
      if (m.payload.width() != 32) throw ProtocolError("RUN_CYCLES expects a 32-bit count");
      if (active_task_ != nullptr) throw ProtocolError("RUN_CYCLES while a call is in flight");
      step(m.payload.get(0, 32));
      flush(out);
      out.push_back(Message{MsgType::kCycleAck, 0, PackedBits{}});
      return;
    }
    case MsgType::kShutdown: {
      if (active_task_ != nullptr) throw ProtocolError("SHUTDOWN while a call is in flight");
      flush(out);
      out.push_back(Message{MsgType::kStreamOut, kControlPort, make_status(StatusKind::kFinalTime, kernel_.now())});
      out.push_back(Message{MsgType::kShutdown, 0, PackedBits{}});
      finished_ = true;
      return;
    }
    case MsgType::kXtfReturn:
    case MsgType::kStreamOut:
    case MsgType::kCycleAck:
      throw ProtocolError(std::string("unexpected ") + to_string(m.type) + " at HDL side");
  }
}

}  // namespace coemu::link
