#include "hdl/buses.hpp"

namespace coemu::hdl {

RegBusPins make_reg_bus(Kernel& k, const std::string& prefix) {
  RegBusPins p;
  p.req = k.add_signal(prefix + ".req", 1);
  p.eop = k.add_signal(prefix + ".eop", 1);
  p.addr = k.add_signal(prefix + ".addr", 32);
  p.data = k.add_signal(prefix + ".data", 32);
  p.be = k.add_signal(prefix + ".be", 4);
  p.r_req = k.add_signal(prefix + ".r_req", 1);
  p.r_data = k.add_signal(prefix + ".r_data", 32);
  p.r_opc = k.add_signal(prefix + ".r_opc", 2);
  return p;
}

VideoPins make_video_bus(Kernel& k, const std::string& prefix) {
  VideoPins p;
  p.frame_start = k.add_signal(prefix + ".frame_start", 1);
  p.line_start = k.add_signal(prefix + ".line_start", 1);
  p.pixel_valid = k.add_signal(prefix + ".pixel_valid", 1);
  p.pixel_data = k.add_signal(prefix + ".pixel_data", 16);
  return p;
}

}  // namespace coemu::hdl
