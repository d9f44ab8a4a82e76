#include "link/transport.hpp"

#include <numeric>

namespace coemu::link {

void WireCapture::record(Dir dir, const Message& m) {
  ++counts_[static_cast<std::size_t>(m.type)];
  if (!keep_lines_) return;
  std::string line = dir == Dir::kToHdl ? "h2d," : "d2h,";
  line += to_string(m.type);
  line += ',' + std::to_string(m.port) + ',' + std::to_string(m.payload.width()) + ',';
  if (m.payload.width() > 0) line += m.payload.to_hex();
  lines_.push_back(std::move(line));
}

std::uint64_t WireCapture::total() const {
  return std::accumulate(std::begin(counts_), std::end(counts_), std::uint64_t{0});
}

void WireCapture::write(std::ostream& out) const {
  for (const auto& l : lines_) out << l << '\n';
}

}  // namespace coemu::link
