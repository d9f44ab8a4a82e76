#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace coemu::codec {

/// Fixed-width bit vector stored most-significant bit first.
///
/// Bit indices used by get/put are value positions (bit 0 is the least
/// significant bit of the numeric value). The byte image is the wire
/// representation: MSB-first, with the final byte zero-padded in its low bits.
class PackedBits {
 public:
  PackedBits() = default;
  explicit PackedBits(std::size_t width);

  static PackedBits from_bytes(std::size_t width, std::span<const std::uint8_t> bytes);
  /// Parses the hex form produced by to_hex(); leading zeros optional.
  static PackedBits from_hex(std::size_t width, std::string_view hex);
  static PackedBits from_u64(std::size_t width, std::uint64_t value);

  std::size_t width() const noexcept { return width_; }
  std::size_t byte_size() const noexcept { return bytes_.size(); }
  std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }

  bool bit(std::size_t index) const;
  void set_bit(std::size_t index, bool value);

  /// Reads `count` (<= 64) bits starting at value bit `lsb`.
  std::uint64_t get(std::size_t lsb, std::size_t count) const;
  /// Writes the low `count` bits of `value` at value bit `lsb`. Higher bits
  /// of `value` must be zero.
  void put(std::size_t lsb, std::size_t count, std::uint64_t value);

  /// Numeric value as lowercase hex, ceil(width/4) digits, no prefix.
  std::string to_hex() const;

  friend bool operator==(const PackedBits&, const PackedBits&) = default;

 private:
  std::size_t width_ = 0;
  std::vector<std::uint8_t> bytes_;
};

/// Concatenates `high` above `low`: result = (high << low.width) | low.
PackedBits concat(const PackedBits& high, const PackedBits& low);

}  // namespace coemu::codec
