#pragma once

#include <cstdint>
#include <vector>

#include "link/message.hpp"
#include "runner/config.hpp"

namespace coemu::runner {

// Port numbering of the generated topology; both sides derive the same list.
inline constexpr std::uint16_t reg_driver_port(std::uint32_t e) { return static_cast<std::uint16_t>(0x10 + e); }
inline constexpr std::uint16_t reg_monitor_port(std::uint32_t e) { return static_cast<std::uint16_t>(0x20 + e); }
inline constexpr std::uint16_t video_in_header_port(std::uint32_t m) { return static_cast<std::uint16_t>(0x30 + m); }
inline constexpr std::uint16_t video_in_pixel_port(std::uint32_t m) { return static_cast<std::uint16_t>(0x40 + m); }
inline constexpr std::uint16_t video_out_header_port(std::uint32_t m) { return static_cast<std::uint16_t>(0x50 + m); }
inline constexpr std::uint16_t video_out_pixel_port(std::uint32_t m) { return static_cast<std::uint16_t>(0x60 + m); }
inline constexpr std::uint16_t irq_port(std::uint32_t d) { return static_cast<std::uint16_t>(0x70 + d); }

inline constexpr std::uint32_t kMaxInterfacesPerKind = 16;

std::vector<link::PortDecl> topology_ports(const HdlConfig& cfg);

}  // namespace coemu::runner
