#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace coemu::dut {

// ISP IP register block. IP i of a subsystem decodes at base + i * kIpStride.
inline constexpr std::uint32_t kIpStride = 0x100;
inline constexpr std::uint32_t kRegEnable = 0x00;
inline constexpr std::uint32_t kRegGain = 0x04;
inline constexpr std::uint32_t kRegOffset = 0x08;
inline constexpr std::uint32_t kRegClampMin = 0x0C;
inline constexpr std::uint32_t kRegClampMax = 0x10;
inline constexpr std::uint32_t kRegVersion = 0x14;  // read-only
inline constexpr std::uint32_t kIspVersion = 0x00010000;

/// Register settings of one IP; also the reset state (see IspResetValues).
struct IspConfig {
  std::uint32_t enable = 0;        // bit 0
  std::uint32_t gain = 0x0100;     // unsigned 8.8
  std::uint32_t offset = 0;        // signed 16-bit, two's complement in low half
  std::uint32_t clamp_min = 0x0000;
  std::uint32_t clamp_max = 0xFFFF;

  friend bool operator==(const IspConfig&, const IspConfig&) = default;
};

struct IspRegInfo {
  const char* name;
  std::uint32_t offset;
  std::uint32_t rw_mask;  // 0 for read-only
};

inline constexpr IspRegInfo kIspRegs[] = {
    {"ENABLE", kRegEnable, 0x1},          {"GAIN", kRegGain, 0xFFFF},
    {"OFFSET", kRegOffset, 0xFFFF},       {"CLAMP_MIN", kRegClampMin, 0xFFFF},
    {"CLAMP_MAX", kRegClampMax, 0xFFFF},  {"VERSION", kRegVersion, 0},
};

/// Reset value of a register in `cfg` by offset; VERSION is constant.
std::uint32_t isp_reset_value(const IspConfig& cfg, std::uint32_t offset);

/// Applies `reset.<NAME>=<value>` style overrides.
IspConfig apply_reset_overrides(IspConfig base, const std::map<std::string, std::uint32_t>& overrides);

// Register-file DUT geometry.
inline constexpr std::uint32_t kRegFileWords = 256;
inline constexpr std::uint32_t kRegFileSpan = kRegFileWords * 4;  // 0x400

}  // namespace coemu::dut
