#include "dut/golden.hpp"

#include "common/error.hpp"

namespace coemu::dut {

std::uint16_t golden_pixel(const IspConfig& cfg, std::uint16_t in) {
  if ((cfg.enable & 1u) == 0) return in;
  const std::uint64_t scaled = (std::uint64_t{in} * (cfg.gain & 0xFFFFu)) / 256u;
  const auto offset = static_cast<std::int16_t>(cfg.offset & 0xFFFFu);
  std::int64_t v = static_cast<std::int64_t>(scaled) + offset;
  const std::int64_t hi = cfg.clamp_max & 0xFFFFu;
  const std::int64_t lo = cfg.clamp_min & 0xFFFFu;
  if (v > hi) v = hi;
  if (v < lo) v = lo;
  return static_cast<std::uint16_t>(v);
}

codec::FrameTxn apply_golden_pipeline(const codec::FrameTxn& frame, const std::vector<IspConfig>& configs,
                                      std::size_t chain_length) {
  if (configs.size() != chain_length) {
    throw ConfigError("golden pipeline needs " + std::to_string(chain_length) + " IP configs, got " +
                      std::to_string(configs.size()));
  }
  codec::validate_frame(frame);
  codec::FrameTxn out = frame;
  for (auto& px : out.pixels) {
    for (const auto& cfg : configs) px = golden_pixel(cfg, px);
  }
  return out;
}

}  // namespace coemu::dut
