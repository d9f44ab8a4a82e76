#include "dut/isp_regs.hpp"

#include "common/error.hpp"

namespace coemu::dut {

std::uint32_t isp_reset_value(const IspConfig& cfg, std::uint32_t offset) {
  switch (offset) {
    case kRegEnable: return cfg.enable;
    case kRegGain: return cfg.gain;
    case kRegOffset: return cfg.offset;
    case kRegClampMin: return cfg.clamp_min;
    case kRegClampMax: return cfg.clamp_max;
    case kRegVersion: return kIspVersion;
    default: throw MapError("no ISP register at offset " + std::to_string(offset));
  }
}

IspConfig apply_reset_overrides(IspConfig base, const std::map<std::string, std::uint32_t>& overrides) {
  for (const auto& [name, value] : overrides) {
    const IspRegInfo* info = nullptr;
    for (const auto& r : kIspRegs) {
      if (name == r.name) info = &r;
    }
    if (info == nullptr) throw ConfigError("unknown ISP register '" + name + "' in reset override");
    if (info->rw_mask == 0) throw ConfigError("cannot override reset value of read-only register " + name);
    const std::uint32_t v = value & info->rw_mask;
    switch (info->offset) {
      case kRegEnable: base.enable = v; break;
      case kRegGain: base.gain = v; break;
      case kRegOffset: base.offset = v; break;
      case kRegClampMin: base.clamp_min = v; break;
      case kRegClampMax: base.clamp_max = v; break;
      default: break;
    }
  }
  return base;
}

}  // namespace coemu::dut
