#pragma once

#include <string>

#include "hdl/kernel.hpp"

namespace coemu::hdl {

/// Register control bus: request pins driven by the master, response pins by the slave.
struct RegBusPins {
  SignalId req, eop, addr, data, be;
  SignalId r_req, r_data, r_opc;
};

RegBusPins make_reg_bus(Kernel& k, const std::string& prefix);

/// Video data bus, one pixel per cycle.
struct VideoPins {
  SignalId frame_start, line_start, pixel_valid, pixel_data;
};

VideoPins make_video_bus(Kernel& k, const std::string& prefix);

}  // namespace coemu::hdl
