#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "codec/transaction.hpp"

namespace coemu::runner {

/// Fixed functional coverage: 4 address quadrants, 2 directions, 2 response
/// opcodes, 3 frame-size classes.
class CoverageDb {
 public:
  static constexpr std::size_t kBinCount = 11;
  static constexpr std::array<std::string_view, kBinCount> kBinNames = {
      "addr_q0", "addr_q1", "addr_q2", "addr_q3", "dir_read", "dir_write",
      "opc_ok",  "opc_error", "frame_small", "frame_medium", "frame_large",
  };
  // Frame-size class limits, in pixels.
  static constexpr std::uint64_t kSmallFrameMax = 64;
  static constexpr std::uint64_t kMediumFrameMax = 256;

  void sample(const codec::RegPacket& completed);
  void sample(const codec::FrameTxn& frame);
  void merge(const CoverageDb& other);

  std::uint64_t hits(std::size_t bin) const { return hits_.at(bin); }
  std::uint64_t hits(std::string_view name) const;
  std::size_t bins_hit() const;
  double percent() const { return 100.0 * static_cast<double>(bins_hit()) / kBinCount; }

  /// One `name,hits` line per bin, then `coverage,<hit>/<total>,<pct>%`.
  std::string report() const;

  friend bool operator==(const CoverageDb&, const CoverageDb&) = default;

 private:
  std::array<std::uint64_t, kBinCount> hits_{};
};

}  // namespace coemu::runner
