#include "link/message.hpp"

#include <algorithm>

#include "common/error.hpp"

namespace coemu::link {

const char* to_string(MsgType t) {
  switch (t) {
    case MsgType::kXtfCall: return "XTF_CALL";
    case MsgType::kXtfReturn: return "XTF_RETURN";
    case MsgType::kStreamIn: return "STREAM_IN";
    case MsgType::kStreamOut: return "STREAM_OUT";
    case MsgType::kCycleTick: return "CYCLE_TICK";
    case MsgType::kCycleAck: return "CYCLE_ACK";
    case MsgType::kRunCycles: return "RUN_CYCLES";
    case MsgType::kShutdown: return "SHUTDOWN";
  }
  return "?";
}

void append_frame(std::vector<std::uint8_t>& out, const Message& m) {
  const auto len = static_cast<std::uint32_t>(m.payload.width());
  out.push_back(kMagic0);
  out.push_back(kMagic1);
  out.push_back(kVersion);
  out.push_back(static_cast<std::uint8_t>(m.type));
  out.push_back(static_cast<std::uint8_t>(m.port >> 8));
  out.push_back(static_cast<std::uint8_t>(m.port & 0xFF));
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(len >> shift));
  const auto bytes = m.payload.bytes();
  out.insert(out.end(), bytes.begin(), bytes.end());
}

std::vector<std::uint8_t> encode_frame(const Message& m) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + m.payload.byte_size());
  append_frame(out, m);
  return out;
}

std::optional<std::size_t> frame_size(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes) return std::nullopt;
  if (bytes[0] != kMagic0 || bytes[1] != kMagic1) throw FramingError("bad frame magic");
  if (bytes[2] != kVersion) throw FramingError("unsupported frame version " + std::to_string(bytes[2]));
  if (bytes[3] > static_cast<std::uint8_t>(MsgType::kShutdown)) {
    throw FramingError("unknown message type " + std::to_string(bytes[3]));
  }
  const std::uint32_t len = (std::uint32_t{bytes[6]} << 24) | (std::uint32_t{bytes[7]} << 16) |
                            (std::uint32_t{bytes[8]} << 8) | std::uint32_t{bytes[9]};
  return kHeaderBytes + (std::size_t{len} + 7) / 8;
}

Message decode_frame(std::span<const std::uint8_t> bytes) {
  const auto size = frame_size(bytes);
  if (!size) throw FramingError("truncated frame header");
  if (bytes.size() < *size) throw FramingError("truncated frame payload");
  if (bytes.size() > *size) throw FramingError("trailing bytes after frame");
  Message m;
  m.type = static_cast<MsgType>(bytes[3]);
  m.port = static_cast<std::uint16_t>((bytes[4] << 8) | bytes[5]);
  const std::uint32_t len = (std::uint32_t{bytes[6]} << 24) | (std::uint32_t{bytes[7]} << 16) |
                            (std::uint32_t{bytes[8]} << 8) | std::uint32_t{bytes[9]};
  try {
    m.payload = PackedBits::from_bytes(len, bytes.subspan(kHeaderBytes));
  } catch (const CodecError& e) {
    throw FramingError(std::string("bad payload: ") + e.what());
  }
  return m;
}

void check_payload(const PortDecl& port, const PackedBits& payload, bool is_return) {
  const auto expected = is_return ? port.return_width : port.payload_width;
  if (payload.width() != expected) {
    throw ProtocolError("port " + std::to_string(port.port_id) + " expects " + std::to_string(expected) +
                        "-bit payload, got " + std::to_string(payload.width()));
  }
}

std::uint32_t topology_hash(std::vector<PortDecl> ports) {
  // FNV-1a over the declared fields, in port-id order.
  std::sort(ports.begin(), ports.end(), [](const PortDecl& a, const PortDecl& b) { return a.port_id < b.port_id; });
  std::uint32_t h = 2166136261u;
  auto mix = [&h](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
      h ^= (v >> (8 * i)) & 0xFFu;
      h *= 16777619u;
    }
  };
  for (const auto& p : ports) {
    mix(p.port_id);
    mix(static_cast<std::uint32_t>(p.direction));
    mix(static_cast<std::uint32_t>(p.kind));
    mix(p.payload_width);
    mix(p.return_width);
  }
  return h;
}

PackedBits make_status(StatusKind kind, std::uint64_t cycle, const std::string& text) {
  PackedBits out(72 + 8 * text.size());
  const std::size_t base = 8 * text.size();
  out.put(base + 64, 8, static_cast<std::uint8_t>(kind));
  out.put(base, 64, cycle);
  for (std::size_t i = 0; i < text.size(); ++i) {
    out.put(8 * (text.size() - 1 - i), 8, static_cast<unsigned char>(text[i]));
  }
  return out;
}

Status parse_status(const PackedBits& payload) {
  if (payload.width() < 72 || payload.width() % 8 != 0) throw ProtocolError("malformed status record");
  const std::size_t n = (payload.width() - 72) / 8;
  Status s{static_cast<StatusKind>(payload.get(8 * n + 64, 8)), payload.get(8 * n, 64), {}};
  for (std::size_t i = 0; i < n; ++i) s.text.push_back(static_cast<char>(payload.get(8 * (n - 1 - i), 8)));
  return s;
}

PackedBits make_hello(LinkMode mode, std::uint32_t topo_hash) {
  PackedBits out(40);
  out.put(32, 8, static_cast<std::uint8_t>(mode));
  out.put(0, 32, topo_hash);
  return out;
}

std::pair<LinkMode, std::uint32_t> parse_hello(const PackedBits& payload) {
  if (payload.width() != 40) throw ProtocolError("malformed session hello");
  const auto mode = payload.get(32, 8);
  if (mode > 1) throw ProtocolError("unknown link mode in hello");
  return {static_cast<LinkMode>(mode), static_cast<std::uint32_t>(payload.get(0, 32))};
}

}  // namespace coemu::link
