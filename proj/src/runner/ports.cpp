#include "runner/ports.hpp"

#include "codec/transaction.hpp"
#include "common/error.hpp"
#include "vip/records.hpp"

namespace coemu::runner {

std::vector<link::PortDecl> topology_ports(const HdlConfig& cfg) {
  using link::Direction;
  using link::PortKind;
  const auto& env = cfg.env;
  if (env.E > kMaxInterfacesPerKind || env.M() > kMaxInterfacesPerKind || env.D > kMaxInterfacesPerKind) {
    throw ConfigError("at most 16 interfaces of each kind are supported");
  }
  std::vector<link::PortDecl> ports;
  for (std::uint32_t e = 0; e < env.E; ++e) {
    ports.push_back({reg_driver_port(e), Direction::kHvlToHdl, PortKind::kReactive, codec::kRegPacketWidth,
                     codec::kRegPacketWidth});
    ports.push_back({reg_monitor_port(e), Direction::kHdlToHvl, PortKind::kStreaming, vip::kMonitorRecordWidth, 0});
  }
  for (std::uint32_t m = 0; m < env.A; ++m) {
    ports.push_back({video_in_header_port(m), Direction::kHvlToHdl, PortKind::kStreaming, codec::kFrameHeaderWidth, 0});
    ports.push_back({video_in_pixel_port(m), Direction::kHvlToHdl, PortKind::kStreaming, codec::kPixelWordWidth, 0});
  }
  for (std::uint32_t m = 0; m < env.C; ++m) {
    ports.push_back({video_out_header_port(m), Direction::kHdlToHvl, PortKind::kStreaming, codec::kFrameHeaderWidth, 0});
    ports.push_back({video_out_pixel_port(m), Direction::kHdlToHvl, PortKind::kStreaming, codec::kPixelWordWidth, 0});
  }
  for (std::uint32_t d = 0; d < env.D; ++d) {
    ports.push_back({irq_port(d), Direction::kHdlToHvl, PortKind::kStreaming, vip::kIrqRecordWidth, 0});
  }
  return ports;
}

}  // namespace coemu::runner
