#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "link/message.hpp"

namespace coemu::link {

/// Reliable, in-order message channel from the HVL side to the HDL side.
class Transport {
 public:
  virtual ~Transport() = default;
  /// Delivers a batch in order. May block when the far side is not draining.
  virtual void send(std::span<const Message> batch) = 0;
  /// Blocks until the next inbound message is available.
  virtual Message receive() = 0;
  virtual void close() = 0;
};

/// Per-frame record of link traffic, seen from the HVL side.
class WireCapture {
 public:
  enum class Dir : std::uint8_t { kToHdl, kToHvl };

  explicit WireCapture(bool keep_lines = true) : keep_lines_(keep_lines) {}

  void record(Dir dir, const Message& m);

  std::uint64_t count(MsgType t) const { return counts_[static_cast<std::size_t>(t)]; }
  std::uint64_t total() const;
  /// Lines `dir,msg_type,port,bitlen,hex`.
  const std::vector<std::string>& lines() const { return lines_; }
  void write(std::ostream& out) const;

 private:
  bool keep_lines_;
  std::uint64_t counts_[8] = {};
  std::vector<std::string> lines_;
};

}  // namespace coemu::link
