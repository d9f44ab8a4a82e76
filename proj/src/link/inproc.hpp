#pragma once

#include <deque>
#include <vector>

#include "link/hdl_endpoint.hpp"
#include "link/transport.hpp"

namespace coemu::link {

/// Same-process transport: every message is encoded to its wire bytes,
/// decoded, and handed to the HDL endpoint synchronously.
class InProcTransport final : public Transport {
 public:
  explicit InProcTransport(HdlEndpoint& endpoint) : endpoint_(endpoint) {}

  void send(std::span<const Message> batch) override;
  Message receive() override;
  void close() override { closed_ = true; }

 private:
  HdlEndpoint& endpoint_;
  std::deque<Message> inbox_;
  std::vector<Message> replies_;
  bool closed_ = false;
};

}  // namespace coemu::link
