#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "codec/packed_bits.hpp"

namespace coemu::link {

using codec::PackedBits;

enum class MsgType : std::uint8_t {
  kXtfCall = 0,
  kXtfReturn = 1,
  kStreamIn = 2,
  kStreamOut = 3,
  kCycleTick = 4,
  kCycleAck = 5,
  kRunCycles = 6,
  kShutdown = 7,
};

const char* to_string(MsgType t);

struct Message {
  MsgType type = MsgType::kShutdown;
  std::uint16_t port = 0;
  PackedBits payload;

  friend bool operator==(const Message&, const Message&) = default;
};

enum class LinkMode : std::uint8_t { kLockstep = 0, kTransactional = 1 };
enum class Direction : std::uint8_t { kHvlToHdl, kHdlToHvl };
enum class PortKind : std::uint8_t { kReactive, kStreaming };

struct PortDecl {
  std::uint16_t port_id = 0;
  Direction direction = Direction::kHvlToHdl;
  PortKind kind = PortKind::kStreaming;
  std::uint32_t payload_width = 0;
  /// Return payload width for reactive ports.
  std::uint32_t return_width = 0;

  friend bool operator==(const PortDecl&, const PortDecl&) = default;
};

/// Reserved port for link control: session hello (HVL->HDL) and status
/// records (HDL->HVL). Its payload width is variable.
inline constexpr std::uint16_t kControlPort = 0xFFFF;
inline constexpr std::size_t kHeaderBytes = 10;
inline constexpr std::uint8_t kMagic0 = 0x53;
inline constexpr std::uint8_t kMagic1 = 0x43;
inline constexpr std::uint8_t kVersion = 0x01;
inline constexpr std::size_t kDefaultStreamDepth = 1024;

std::vector<std::uint8_t> encode_frame(const Message& m);
void append_frame(std::vector<std::uint8_t>& out, const Message& m);

/// Decodes exactly one frame occupying all of `bytes`.
Message decode_frame(std::span<const std::uint8_t> bytes);

/// Total frame size announced by a header, or nullopt if fewer than
/// kHeaderBytes are available. Validates magic and version.
std::optional<std::size_t> frame_size(std::span<const std::uint8_t> bytes);

/// Validates a payload against a port's declared width.
void check_payload(const PortDecl& port, const PackedBits& payload, bool is_return = false);

/// Stable 32-bit fingerprint of a port table; both sides must agree on it.
std::uint32_t topology_hash(std::vector<PortDecl> ports);

// Status records carried on kControlPort from HDL to HVL.
enum class StatusKind : std::uint8_t { kFinalTime = 1, kError = 2 };
PackedBits make_status(StatusKind kind, std::uint64_t cycle, const std::string& text = {});
struct Status {
  StatusKind kind;
  std::uint64_t cycle;
  std::string text;
};
Status parse_status(const PackedBits& payload);

PackedBits make_hello(LinkMode mode, std::uint32_t topo_hash);
std::pair<LinkMode, std::uint32_t> parse_hello(const PackedBits& payload);

}  // namespace coemu::link
