#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <string>

#include "codec/packed_bits.hpp"
#include "codec/transaction.hpp"
#include "common/error.hpp"

using namespace coemu;
using namespace coemu::codec;

namespace {

using u128 = unsigned __int128;

// Independent shift-and-or reference for the 105-bit layout.
u128 oracle_pack(const RegPacket& p) {
  return (u128(p.req) << 104) | (u128(p.eop) << 103) | (u128(p.addr) << 71) | (u128(p.data) << 39) |
         (u128(p.be) << 35) | (u128(p.r_req) << 34) | (u128(p.r_data) << 2) | u128(p.r_opc);
}

u128 value_of(const PackedBits& b) {
  u128 v = 0;
  for (std::size_t i = b.width(); i-- > 0;) v = (v << 1) | u128(b.bit(i));
  return v;
}

RegPacket random_packet(std::mt19937_64& rng) {
  RegPacket p;
  p.req = rng() & 1;
  p.eop = rng() & 1;
  p.addr = static_cast<std::uint32_t>(rng());
  p.data = static_cast<std::uint32_t>(rng());
  p.be = rng() & 0xF;
  p.r_req = rng() & 1;
  p.r_data = static_cast<std::uint32_t>(rng());
  p.r_opc = rng() & 3;
  return p;
}

}  // namespace

TEST(PackedBits, ByteImageIsMsbFirstWithLowPad) {
  auto b = PackedBits::from_u64(12, 0xABC);
  ASSERT_EQ(b.byte_size(), 2u);
  EXPECT_EQ(b.bytes()[0], 0xAB);
  EXPECT_EQ(b.bytes()[1], 0xC0);
  EXPECT_EQ(b.to_hex(), "abc");
}

TEST(PackedBits, FromBytesRejectsNonzeroPadAndWrongSize) {
  const std::uint8_t ok[] = {0xAB, 0xC0};
  const std::uint8_t pad[] = {0xAB, 0xC1};
  EXPECT_EQ(PackedBits::from_bytes(12, ok), PackedBits::from_u64(12, 0xABC));
  EXPECT_THROW(PackedBits::from_bytes(12, pad), CodecError);
  EXPECT_THROW(PackedBits::from_bytes(16, std::span<const std::uint8_t>(ok, 1)), CodecError);
}

TEST(PackedBits, GetPutAndHexRoundTrip) {
  PackedBits b(70);
  b.put(3, 64, 0xDEADBEEFCAFEF00Dull);
  EXPECT_EQ(b.get(3, 64), 0xDEADBEEFCAFEF00Dull);
  EXPECT_EQ(PackedBits::from_hex(70, b.to_hex()), b);
  EXPECT_EQ(b.to_hex().size(), 18u);
}

TEST(PackedBits, Concat) {
  auto c = concat(PackedBits::from_u64(4, 0xA), PackedBits::from_u64(8, 0x5C));
  EXPECT_EQ(c.width(), 12u);
  EXPECT_EQ(c.get(0, 12), 0xA5Cu);
}

TEST(RegCodec, LayoutIs105Bits) {
  const auto& l = reg_packet_layout();
  EXPECT_EQ(l.total_width(), 105u);
  EXPECT_EQ(l.lsb_of("req"), 104u);
  EXPECT_EQ(l.lsb_of("addr"), 71u);
  EXPECT_EQ(l.lsb_of("r_opc"), 0u);
  EXPECT_EQ(l.width_of("be"), 4u);
}

TEST(RegCodec, ZeroPacket) {
  const auto b = pack_reg(RegPacket{});
  EXPECT_EQ(b.width(), 105u);
  EXPECT_EQ(value_of(b), u128(0));
  EXPECT_EQ(unpack_reg(PackedBits(105)), RegPacket{});
}

TEST(RegCodec, ReqOnlySetsBit104) {
  RegPacket p;
  p.req = 1;
  const auto b = pack_reg(p);
  for (std::size_t i = 0; i < 105; ++i) EXPECT_EQ(b.bit(i), i == 104) << i;
}

TEST(RegCodec, WriteExampleMatchesOracle) {
  RegPacket p;
  p.req = 1;
  p.addr = 0x10;
  p.data = 0xA5A5A5A5;
  p.be = 0xF;
  EXPECT_TRUE(value_of(pack_reg(p)) == oracle_pack(p));
  // Frozen from the oracle.
  EXPECT_EQ(pack_reg(p).to_hex(), "10000000852d2d2d2f800000000");
}

TEST(RegCodec, RandomRoundTripAndOracle) {
  std::mt19937_64 rng(12345);
  for (int i = 0; i < 10000; ++i) {
    const auto p = random_packet(rng);
    const auto b = pack_reg(p);
    ASSERT_TRUE(value_of(b) == oracle_pack(p)) << i;
    ASSERT_EQ(unpack_reg(b), p) << i;
  }
}

TEST(RegCodec, WrongWidthIsCodecError) {
  EXPECT_THROW(unpack_reg(PackedBits(104)), CodecError);
  EXPECT_THROW(unpack_reg(PackedBits(106)), CodecError);
}

TEST(RegCodec, OutOfRangeFieldIsRejected) {
  RegPacket p;
  p.be = 0x1F;
  EXPECT_FALSE(p.fields_in_range());
  EXPECT_THROW(pack_reg(p), CodecError);
}

TEST(RegCodec, FieldIsolation) {
  std::mt19937_64 rng(99);
  const auto& layout = reg_packet_layout();
  for (int i = 0; i < 200; ++i) {
    const auto p = random_packet(rng);
    const u128 base = value_of(pack_reg(p));
    for (const auto& f : layout.fields()) {
      RegPacket q = p;
      const std::uint64_t flip = (f.width >= 64) ? ~0ull : ((1ull << f.width) - 1);
      if (f.name == "req") q.req ^= flip;
      else if (f.name == "eop") q.eop ^= flip;
      else if (f.name == "addr") q.addr ^= static_cast<std::uint32_t>(flip);
      else if (f.name == "data") q.data ^= static_cast<std::uint32_t>(flip);
      else if (f.name == "be") q.be ^= flip;
      else if (f.name == "r_req") q.r_req ^= flip;
      else if (f.name == "r_data") q.r_data ^= static_cast<std::uint32_t>(flip);
      else if (f.name == "r_opc") q.r_opc ^= flip;
      const u128 diff = base ^ value_of(pack_reg(q));
      const u128 expect = ((u128(1) << f.width) - 1) << layout.lsb_of(f.name);
      ASSERT_TRUE(diff == expect) << f.name;
    }
  }
}

TEST(RegCodec, GoldenVectorFile) {
  std::ifstream in(std::string(COEMU_SOURCE_DIR) + "/tests/data/reg_vectors.txt");
  ASSERT_TRUE(in);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto [p, expected] = parse_golden_vector_line(line);
    EXPECT_EQ(pack_reg(p), expected) << line;
    EXPECT_EQ(golden_vector_line(p), line);
    ++n;
  }
  EXPECT_EQ(n, 60);
}

TEST(FrameCodec, TwoByOneExample) {
  FrameTxn f{1, 2, 1, {3, 7}};
  EXPECT_EQ(pack_frame_header(f).to_hex(), "000100020001");
  const auto words = pack_frame_pixels(f);
  ASSERT_EQ(words.size(), 1u);
  EXPECT_EQ(words[0].get(0, 32), 0x00030007u);
}

TEST(FrameCodec, OddPixelPadded) {
  FrameTxn f{0, 1, 1, {9}};
  const auto words = pack_frame_pixels(f);
  ASSERT_EQ(words.size(), 1u);
  EXPECT_EQ(words[0].get(0, 32), 0x00090000u);
}

TEST(FrameCodec, ZeroDimensionRejected) {
  FrameTxn f{0, 0, 5, {}};
  EXPECT_THROW(pack_frame_header(f), CodecError);
  EXPECT_THROW(validate_frame(f), CodecError);
  FrameTxn g{0, 2, 2, {1, 2, 3}};
  EXPECT_THROW(validate_frame(g), CodecError);
}

TEST(FrameCodec, StreamLengthAndRoundTrip) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    FrameTxn f;
    f.frame_id = static_cast<std::uint16_t>(rng());
    f.width = static_cast<std::uint16_t>(1 + rng() % 40);
    f.height = static_cast<std::uint16_t>(1 + rng() % 40);
    f.pixels.resize(std::size_t{f.width} * f.height);
    for (auto& px : f.pixels) px = static_cast<std::uint16_t>(rng());
    const auto words = pack_frame_pixels(f);
    ASSERT_EQ(words.size(), (f.pixels.size() + 1) / 2);
    ASSERT_EQ(words.size(), pixel_word_count(f.width, f.height));
    ASSERT_EQ(unpack_frame(pack_frame_header(f), words), f);
  }
}

TEST(FrameCodec, WrongWordCountRejected) {
  FrameTxn f{0, 2, 2, {1, 2, 3, 4}};
  auto words = pack_frame_pixels(f);
  words.pop_back();
  EXPECT_THROW(unpack_frame(pack_frame_header(f), words), CodecError);
}
