#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "codec/transaction.hpp"
#include "dut/isp_regs.hpp"

namespace coemu::dut {

/// Reference per-pixel transfer: clamp(((in * gain) >> 8) + offset, min, max),
/// truncating fixed point; ENABLE=0 passes the pixel through.
std::uint16_t golden_pixel(const IspConfig& cfg, std::uint16_t in);

/// Folds the transfer function across a chain of `chain_length` IPs.
codec::FrameTxn apply_golden_pipeline(const codec::FrameTxn& frame, const std::vector<IspConfig>& configs,
                                      std::size_t chain_length);

}  // namespace coemu::dut
