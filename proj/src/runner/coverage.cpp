#include "runner/coverage.hpp"

#include <cstdio>
#include <stdexcept>

namespace coemu::runner {

void CoverageDb::sample(const codec::RegPacket& p) {
  ++hits_[(p.addr >> 8) & 3];
  ++hits_[p.is_read() ? 4 : 5];
  ++hits_[p.r_opc == static_cast<std::uint32_t>(codec::ResponseOpcode::kOk) ? 6 : 7];
}

void CoverageDb::sample(const codec::FrameTxn& f) {
  const std::uint64_t px = std::uint64_t{f.width} * f.height;
  ++hits_[px <= kSmallFrameMax ? 8 : px <= kMediumFrameMax ? 9 : 10];
}

void CoverageDb::merge(const CoverageDb& other) {
  for (std::size_t i = 0; i < kBinCount; ++i) hits_[i] += other.hits_[i];
}

std::uint64_t CoverageDb::hits(std::string_view name) const {
  for (std::size_t i = 0; i < kBinCount; ++i) {
    if (kBinNames[i] == name) return hits_[i];
  }
  throw std::out_of_range("no coverage bin named " + std::string(name));
}

std::size_t CoverageDb::bins_hit() const {
  std::size_t n = 0;
  for (auto h : hits_) n += h > 0;
  return n;
}

std::string CoverageDb::report() const {
  std::string out;
  for (std::size_t i = 0; i < kBinCount; ++i) {
    out += kBinNames[i];
    out += ',';
    out += std::to_string(hits_[i]);
    out += '\n';
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "coverage,%zu/%zu,%.2f%%\n", bins_hit(), kBinCount, percent());
  out += buf;
  return out;
}

}  // namespace coemu::runner
