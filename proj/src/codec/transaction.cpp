#include "codec/transaction.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "common/error.hpp"

namespace coemu::codec {

FieldLayout::FieldLayout(std::vector<Field> fields) : fields_(std::move(fields)) {
  for (const auto& f : fields_) total_width_ += f.width;
  std::size_t remaining = total_width_;
  for (const auto& f : fields_) {
    remaining -= f.width;
    lsb_.push_back(remaining);
  }
}

std::size_t FieldLayout::lsb_of(std::string_view name) const {
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    if (fields_[i].name == name) return lsb_[i];
  }
  throw CodecError("unknown field '" + std::string(name) + "'");
}

std::size_t FieldLayout::width_of(std::string_view name) const {
  for (const auto& f : fields_) {
    if (f.name == name) return f.width;
  }
  throw CodecError("unknown field '" + std::string(name) + "'");
}

bool RegPacket::fields_in_range() const noexcept {
  return req <= 1 && eop <= 1 && be <= 0xF && r_req <= 1 && r_opc <= 3;
}

const FieldLayout& reg_packet_layout() {
  static const FieldLayout layout({{"req", 1},
                                   {"eop", 1},
                                   {"addr", 32},
                                   {"data", 32},
                                   {"be", 4},
                                   {"r_req", 1},
                                   {"r_data", 32},
                                   {"r_opc", 2}});
  return layout;
}

namespace {

std::uint64_t field_value(const RegPacket& p, std::string_view name) {
  if (name == "req") return p.req;
  if (name == "eop") return p.eop;
  if (name == "addr") return p.addr;
  if (name == "data") return p.data;
  if (name == "be") return p.be;
  if (name == "r_req") return p.r_req;
  if (name == "r_data") return p.r_data;
  return p.r_opc;
}

void set_field(RegPacket& p, std::string_view name, std::uint64_t v) {
  if (name == "req") p.req = static_cast<std::uint8_t>(v);
  else if (name == "eop") p.eop = static_cast<std::uint8_t>(v);
  else if (name == "addr") p.addr = static_cast<std::uint32_t>(v);
  else if (name == "data") p.data = static_cast<std::uint32_t>(v);
  else if (name == "be") p.be = static_cast<std::uint8_t>(v);
  else if (name == "r_req") p.r_req = static_cast<std::uint8_t>(v);
  else if (name == "r_data") p.r_data = static_cast<std::uint32_t>(v);
  else p.r_opc = static_cast<std::uint8_t>(v);
}

}  // namespace

PackedBits pack_reg(const RegPacket& p) {
  if (!p.fields_in_range()) throw CodecError("RegPacket field exceeds its declared width");
  const auto& layout = reg_packet_layout();
  PackedBits out(layout.total_width());
  for (const auto& f : layout.fields()) out.put(layout.lsb_of(f.name), f.width, field_value(p, f.name));
  return out;
}

RegPacket unpack_reg(const PackedBits& bits) {
  const auto& layout = reg_packet_layout();
  if (bits.width() != layout.total_width()) {
    throw CodecError("RegPacket expects " + std::to_string(layout.total_width()) + " bits, got " +
                     std::to_string(bits.width()));
  }
  RegPacket p;
  for (const auto& f : layout.fields()) set_field(p, f.name, bits.get(layout.lsb_of(f.name), f.width));
  return p;
}

std::string golden_vector_line(const RegPacket& p) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%x %x %08x %08x %x %x %08x %x -> ", p.req, p.eop, p.addr, p.data, p.be,
                p.r_req, p.r_data, p.r_opc);
  return buf + pack_reg(p).to_hex();
}

std::pair<RegPacket, PackedBits> parse_golden_vector_line(std::string_view line) {
  const auto arrow = line.find("->");
  if (arrow == std::string_view::npos) throw CodecError("golden vector line missing '->'");
  std::istringstream fields{std::string(line.substr(0, arrow))};
  RegPacket p;
  const auto& layout = reg_packet_layout();
  for (const auto& f : layout.fields()) {
    std::string tok;
    if (!(fields >> tok)) throw CodecError("golden vector line has too few fields");
    set_field(p, f.name, PackedBits::from_hex(f.width, tok).get(0, f.width));
  }
  std::string packed{line.substr(arrow + 2)};
  packed.erase(std::remove_if(packed.begin(), packed.end(), [](char c) { return c == ' ' || c == '\r'; }),
               packed.end());
  return {p, PackedBits::from_hex(layout.total_width(), packed)};
}

void validate_frame(const FrameTxn& f) {
  if (f.width == 0 || f.height == 0) {
    throw CodecError("frame dimensions must be nonzero (got " + std::to_string(f.width) + "x" +
                     std::to_string(f.height) + ")");
  }
  if (f.pixels.size() != std::size_t{f.width} * f.height) {
    throw CodecError("frame pixel count " + std::to_string(f.pixels.size()) + " != width*height");
  }
}

PackedBits pack_frame_header(const FrameTxn& f) {
  if (f.width == 0 || f.height == 0) throw CodecError("frame dimensions must be nonzero");
  PackedBits out(kFrameHeaderWidth);
  out.put(32, 16, f.frame_id);
  out.put(16, 16, f.width);
  out.put(0, 16, f.height);
  return out;
}

FrameHeader unpack_frame_header(const PackedBits& bits) {
  if (bits.width() != kFrameHeaderWidth) throw CodecError("frame header expects 48 bits");
  FrameHeader h;
  h.frame_id = static_cast<std::uint16_t>(bits.get(32, 16));
  h.width = static_cast<std::uint16_t>(bits.get(16, 16));
  h.height = static_cast<std::uint16_t>(bits.get(0, 16));
  if (h.width == 0 || h.height == 0) throw CodecError("frame header has zero dimension");
  return h;
}

PackedBits pack_pixel_word(std::uint16_t first, std::uint16_t second) {
  return PackedBits::from_u64(kPixelWordWidth, (std::uint64_t{first} << 16) | second);
}

std::size_t pixel_word_count(std::uint16_t width, std::uint16_t height) {
  return (std::size_t{width} * height + 1) / 2;
}

std::vector<PackedBits> pack_frame_pixels(const FrameTxn& f) {
  validate_frame(f);
  std::vector<PackedBits> words;
  words.reserve(pixel_word_count(f.width, f.height));
  for (std::size_t i = 0; i < f.pixels.size(); i += 2) {
    const std::uint16_t second = i + 1 < f.pixels.size() ? f.pixels[i + 1] : 0;
    words.push_back(pack_pixel_word(f.pixels[i], second));
  }
  return words;
}

FrameTxn unpack_frame(const PackedBits& header, const std::vector<PackedBits>& words) {
  const FrameHeader h = unpack_frame_header(header);
  const std::size_t count = std::size_t{h.width} * h.height;
  if (words.size() != pixel_word_count(h.width, h.height)) {
    throw CodecError("frame expects " + std::to_string(pixel_word_count(h.width, h.height)) +
                     " pixel words, got " + std::to_string(words.size()));
  }
  FrameTxn f{h.frame_id, h.width, h.height, {}};
  f.pixels.reserve(count);
  for (const auto& w : words) {
    if (w.width() != kPixelWordWidth) throw CodecError("pixel word expects 32 bits");
    f.pixels.push_back(static_cast<std::uint16_t>(w.get(16, 16)));
    if (f.pixels.size() < count) f.pixels.push_back(static_cast<std::uint16_t>(w.get(0, 16)));
  }
  return f;
}

}  // namespace coemu::codec
