#include "link/inproc.hpp"

#include "common/error.hpp"

namespace coemu::link {

void InProcTransport::send(std::span<const Message> batch) {
  if (closed_) throw TransportError("transport closed");
  for (const auto& m : batch) {
    // A finished peer stops reading; whatever it already replied stays deliverable.
    if (endpoint_.finished()) break;
    const auto wire = encode_frame(m);
    replies_.clear();
    endpoint_.handle(decode_frame(wire), replies_);
    for (const auto& r : replies_) inbox_.push_back(decode_frame(encode_frame(r)));
  }
}

Message InProcTransport::receive() {
  if (closed_) throw TransportError("transport closed");
  if (inbox_.empty() && endpoint_.finished()) throw TransportError("HDL side closed the session");
  if (inbox_.empty()) throw TransportError("HDL side has nothing to deliver (would block forever)");
  Message m = std::move(inbox_.front());
  inbox_.pop_front();
  return m;
}

}  // namespace coemu::link
