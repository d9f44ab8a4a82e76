#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "codec/packed_bits.hpp"

namespace coemu::codec {

/// Ordered field list; packing order is MSB-first in declaration order.
class FieldLayout {
 public:
  struct Field {
    std::string name;
    std::size_t width;
  };

  explicit FieldLayout(std::vector<Field> fields);

  const std::vector<Field>& fields() const noexcept { return fields_; }
  std::size_t total_width() const noexcept { return total_width_; }
  /// Value-bit position of the field's least significant bit.
  std::size_t lsb_of(std::string_view name) const;
  std::size_t width_of(std::string_view name) const;

 private:
  std::vector<Field> fields_;
  std::vector<std::size_t> lsb_;
  std::size_t total_width_ = 0;
};

enum class ResponseOpcode : std::uint8_t { kOk = 0, kError = 1 };

/// Field-record form of a register-bus transaction.
/// be == 0 denotes a read; any nonzero byte-enable mask denotes a write.
struct RegPacket {
  std::uint8_t req = 0;     // 1 bit
  std::uint8_t eop = 0;     // 1 bit
  std::uint32_t addr = 0;
  std::uint32_t data = 0;
  std::uint8_t be = 0;      // 4 bits
  std::uint8_t r_req = 0;   // 1 bit
  std::uint32_t r_data = 0;
  std::uint8_t r_opc = 0;   // 2 bits

  bool is_read() const noexcept { return be == 0; }
  bool fields_in_range() const noexcept;

  friend bool operator==(const RegPacket&, const RegPacket&) = default;
};

const FieldLayout& reg_packet_layout();
inline constexpr std::size_t kRegPacketWidth = 105;

PackedBits pack_reg(const RegPacket& p);
RegPacket unpack_reg(const PackedBits& bits);

/// One golden-vector line: `<fields in hex, space separated> -> <packed hex>`.
std::string golden_vector_line(const RegPacket& p);
/// Parses a golden-vector line into the packet and expected packed value.
std::pair<RegPacket, PackedBits> parse_golden_vector_line(std::string_view line);

/// A video frame: row-major 16-bit samples.
struct FrameTxn {
  std::uint16_t frame_id = 0;
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::vector<std::uint16_t> pixels;

  friend bool operator==(const FrameTxn&, const FrameTxn&) = default;
};

inline constexpr std::size_t kFrameHeaderWidth = 48;
inline constexpr std::size_t kPixelWordWidth = 32;

struct FrameHeader {
  std::uint16_t frame_id = 0;
  std::uint16_t width = 0;
  std::uint16_t height = 0;
};

PackedBits pack_frame_header(const FrameTxn& f);
FrameHeader unpack_frame_header(const PackedBits& bits);
/// Two consecutive pixels per word, earlier pixel in the high half.
PackedBits pack_pixel_word(std::uint16_t first, std::uint16_t second);
/// All pixel words of a frame, ceil(W*H/2) of them; odd tail padded with zero.
std::vector<PackedBits> pack_frame_pixels(const FrameTxn& f);
std::size_t pixel_word_count(std::uint16_t width, std::uint16_t height);
/// Rebuilds a frame from its header and exactly pixel_word_count() words.
FrameTxn unpack_frame(const PackedBits& header, const std::vector<PackedBits>& words);

void validate_frame(const FrameTxn& f);

}  // namespace coemu::codec
