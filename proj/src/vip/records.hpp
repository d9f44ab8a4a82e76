#pragma once

#include <cstdint>

#include "codec/packed_bits.hpp"
#include "codec/transaction.hpp"

namespace coemu::vip {

/// What the register monitor BFM streams back per observed transfer:
/// kind (1 bit, 1 = protocol violation) | cycle (64) | packet (105).
struct MonitorRecord {
  bool protocol_error = false;
  std::uint64_t cycle = 0;
  codec::RegPacket packet;

  friend bool operator==(const MonitorRecord&, const MonitorRecord&) = default;
};

inline constexpr std::size_t kMonitorRecordWidth = 1 + 64 + codec::kRegPacketWidth;
inline constexpr std::size_t kIrqRecordWidth = 64;

codec::PackedBits pack_monitor_record(const MonitorRecord& r);
MonitorRecord unpack_monitor_record(const codec::PackedBits& bits);

/// Default cycles the driver BFM waits for r_req before giving up.
inline constexpr std::uint32_t kDefaultResponseTimeout = 64;

/// Cycles between the start of the directive that finds a frame header
/// queued and that frame's first pixel on the DUT input pins.
inline constexpr std::uint32_t kVideoDriveOffset = 1;

}  // namespace coemu::vip
