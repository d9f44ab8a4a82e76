#include "codec/packed_bits.hpp"

#include "common/error.hpp"

namespace coemu::codec {

namespace {

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

PackedBits::PackedBits(std::size_t width) : width_(width), bytes_((width + 7) / 8, 0) {}

PackedBits PackedBits::from_bytes(std::size_t width, std::span<const std::uint8_t> bytes) {
  PackedBits out(width);
  if (bytes.size() != out.bytes_.size()) {
    throw CodecError("byte image size " + std::to_string(bytes.size()) + " does not match width " +
                     std::to_string(width));
  }
  std::copy(bytes.begin(), bytes.end(), out.bytes_.begin());
  const std::size_t pad = out.bytes_.size() * 8 - width;
  if (pad != 0) {
    const auto pad_mask = static_cast<std::uint8_t>((1u << pad) - 1u);
    if ((out.bytes_.back() & pad_mask) != 0) throw CodecError("nonzero pad bits in byte image");
  }
  return out;
}

PackedBits PackedBits::from_hex(std::size_t width, std::string_view hex) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  PackedBits out(width);
  std::size_t bit_index = 0;
  for (auto it = hex.rbegin(); it != hex.rend(); ++it) {
    const int d = hex_digit(*it);
    if (d < 0) throw CodecError("invalid hex digit in '" + std::string(hex) + "'");
    for (int b = 0; b < 4; ++b, ++bit_index) {
      const bool set = ((d >> b) & 1) != 0;
      if (bit_index < width) {
        out.set_bit(bit_index, set);
      } else if (set) {
        throw CodecError("hex value exceeds " + std::to_string(width) + " bits");
      }
    }
  }
  return out;
}

PackedBits PackedBits::from_u64(std::size_t width, std::uint64_t value) {
  PackedBits out(width);
  out.put(0, width < 64 ? width : 64, width < 64 ? value & ((std::uint64_t{1} << width) - 1) : value);
  return out;
}

bool PackedBits::bit(std::size_t index) const {
  if (index >= width_) throw CodecError("bit index out of range");
  const std::size_t pos = width_ - 1 - index;
  return ((bytes_[pos / 8] >> (7 - pos % 8)) & 1u) != 0;
}

void PackedBits::set_bit(std::size_t index, bool value) {
  if (index >= width_) throw CodecError("bit index out of range");
  const std::size_t pos = width_ - 1 - index;
  const auto mask = static_cast<std::uint8_t>(1u << (7 - pos % 8));
  if (value) {
    bytes_[pos / 8] |= mask;
  } else {
    bytes_[pos / 8] &= static_cast<std::uint8_t>(~mask);
  }
}

std::uint64_t PackedBits::get(std::size_t lsb, std::size_t count) const {
  if (count > 64 || lsb + count > width_) throw CodecError("field outside packed width");
  std::uint64_t v = 0;
  for (std::size_t i = count; i-- > 0;) v = (v << 1) | (bit(lsb + i) ? 1u : 0u);
  return v;
}

void PackedBits::put(std::size_t lsb, std::size_t count, std::uint64_t value) {
  if (count > 64 || lsb + count > width_) throw CodecError("field outside packed width");
  if (count < 64 && (value >> count) != 0) {
    throw CodecError("value does not fit in " + std::to_string(count) + " bits");
  }
  for (std::size_t i = 0; i < count; ++i) set_bit(lsb + i, ((value >> i) & 1u) != 0);
}

std::string PackedBits::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t digits = (width_ + 3) / 4;
  std::string out(digits, '0');
  for (std::size_t d = 0; d < digits; ++d) {
    unsigned nibble = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      const std::size_t idx = d * 4 + b;
      if (idx < width_ && bit(idx)) nibble |= 1u << b;
    }
    out[digits - 1 - d] = kDigits[nibble];
  }
  return out;
}

PackedBits concat(const PackedBits& high, const PackedBits& low) {
  PackedBits out(high.width() + low.width());
  for (std::size_t i = 0; i < low.width(); ++i) out.set_bit(i, low.bit(i));
  for (std::size_t i = 0; i < high.width(); ++i) out.set_bit(low.width() + i, high.bit(i));
  return out;
}

}  // namespace coemu::codec
