#include "support.hpp"

#include <gtest/gtest.h>

using namespace bsprng;

namespace {

RowBlock
random_rows(std::mt19937_64& rng, std::size_t lanes, std::size_t m)
{
  RowBlock r;
  for (std::size_t j = 0; j < lanes; j++) r.rows.push_back(testsupport::random_bits(rng, m));
  return r;
}

} // namespace

template<typename W>
class SlabTest : public ::testing::Test
{};
using SlabWords = ::testing::Types<std::uint32_t, std::uint64_t>;
TYPED_TEST_SUITE(SlabTest, SlabWords);

TYPED_TEST(SlabTest, TransposeRoundTripsForManyLengths)
{
  using W = TypeParam;
  std::mt19937_64 rng(11);
  for (std::size_t m : { 1u, 7u, 31u, 32u, 33u, 64u, 100u, 129u, 1000u }) {
    const auto rows = random_rows(rng, lanes_v<W>, m);
    const auto slab = transpose_to_sliced<W>(rows);
    ASSERT_EQ(slab.size(), m);
    EXPECT_EQ(transpose_to_rows(slab), rows) << m;
  }
}

TYPED_TEST(SlabTest, FastTransposeMatchesNaive)
{
  using W = TypeParam;
  std::mt19937_64 rng(12);
  for (std::size_t m : { 5u, 64u, 77u, 300u }) {
    const auto rows = random_rows(rng, lanes_v<W>, m);
    EXPECT_EQ(transpose_to_sliced<W>(rows), transpose_to_sliced_naive<W>(rows));
  }
}

TYPED_TEST(SlabTest, RegisterHoldsBitOfEveryLane)
{
  using W = TypeParam;
  std::mt19937_64 rng(13);
  const auto rows = random_rows(rng, lanes_v<W>, 40);
  const auto slab = transpose_to_sliced<W>(rows);
  for (std::size_t i = 0; i < 40; i++) {
    for (std::size_t j = 0; j < lanes_v<W>; j++) EXPECT_EQ(lane_bit(slab[i], j), rows.rows[j][i] != 0);
  }
}

TYPED_TEST(SlabTest, RaggedAndWrongLaneCountRejected)
{
  using W = TypeParam;
  RowBlock r;
  r.rows.assign(lanes_v<W>, Bits(10, 0));
  r.rows[3].resize(9);
  EXPECT_THROW(transpose_to_sliced<W>(r), StructuralError);
  RowBlock few;
  few.rows.assign(lanes_v<W> - 1, Bits(10, 0));
  EXPECT_THROW(transpose_to_sliced<W>(few), StructuralError);
}

TYPED_TEST(SlabTest, ExtractLaneOutOfRange)
{
  using W = TypeParam;
  SlicedBlock<W> s(4);
  EXPECT_THROW(extract_lane(s, lanes_v<W>), IndexError);
  EXPECT_THROW(s.at(4), IndexError);
}

TYPED_TEST(SlabTest, RotateIsCyclicReindexing)
{
  using W = TypeParam;
  const std::size_t m = 9;
  SlicedBlock<W> s(m);
  for (std::size_t i = 0; i < m; i++) s[i] = from_raw<W>(static_cast<raw_t<W>>(i + 1));
  for (std::size_t c = 0; c < m; c++) {
    const auto t = rotate_registers(s, ShiftDirection::toward_origin, c);
    const auto a = rotate_registers(s, ShiftDirection::away_from_origin, c);
    for (std::size_t i = 0; i < m; i++) {
      EXPECT_EQ(to_raw(t[i]), to_raw(s[(i + c) % m]));
      EXPECT_EQ(to_raw(a[i]), to_raw(s[(i + m - c) % m]));
    }
    EXPECT_EQ(rotate_registers(t, ShiftDirection::away_from_origin, c), s);
  }
}

TYPED_TEST(SlabTest, RotateCountEqualToMFillsZeroOnly)
{
  using W = TypeParam;
  SlicedBlock<W> s(5);
  for (std::size_t i = 0; i < 5; i++) s[i] = ones_word<W>();
  EXPECT_THROW(rotate_registers(s, ShiftDirection::toward_origin, 5), RangeError);
  const auto z = rotate_registers(s, ShiftDirection::toward_origin, 5, Fill::zero);
  for (std::size_t i = 0; i < 5; i++) EXPECT_EQ(to_raw(z[i]), raw_t<W>{ 0 });
  EXPECT_THROW(rotate_registers(s, ShiftDirection::toward_origin, 6, Fill::zero), RangeError);
}

TYPED_TEST(SlabTest, RotateWithZeroFillClearsVacatedRegisters)
{
  using W = TypeParam;
  SlicedBlock<W> s(6);
  for (std::size_t i = 0; i < 6; i++) s[i] = from_raw<W>(static_cast<raw_t<W>>(10 + i));
  const auto t = rotate_registers(s, ShiftDirection::toward_origin, 2, Fill::zero);
  EXPECT_EQ(to_raw(t[0]), raw_t<W>{ 12 });
  EXPECT_EQ(to_raw(t[4]), raw_t<W>{ 0 });
  EXPECT_EQ(to_raw(t[5]), raw_t<W>{ 0 });
  const auto a = rotate_registers(s, ShiftDirection::away_from_origin, 2, Fill::zero);
  EXPECT_EQ(to_raw(a[0]), raw_t<W>{ 0 });
  EXPECT_EQ(to_raw(a[2]), raw_t<W>{ 10 });
}

TYPED_TEST(SlabTest, RotateSpendsNoLogicOps)
{
  using C = CountedWord<TypeParam>;
  SlicedBlock<C> s(17);
  const auto before = op_counters.total();
  s.rotate(ShiftDirection::toward_origin, 5);
  s.rotate(ShiftDirection::away_from_origin, 3);
  EXPECT_EQ(op_counters.total(), before);
}

TYPED_TEST(SlabTest, WordsToLaneBytesMatchesExtractLane)
{
  using W = TypeParam;
  std::mt19937_64 rng(14);
  for (std::size_t m : { 8u, 64u, 136u }) {
    const auto rows = random_rows(rng, lanes_v<W>, m);
    const auto slab = transpose_to_sliced<W>(rows);
    const auto words = slab.registers();
    for (auto order : { BitOrder::msb_first, BitOrder::lsb_first }) {
      const auto lanes = words_to_lane_bytes<W>(std::span<const W>(words), order);
      for (std::size_t j = 0; j < lanes_v<W>; j++) EXPECT_EQ(lanes[j], pack_bits(rows.rows[j], order));
    }
  }
  std::vector<W> bad(7);
  EXPECT_THROW(words_to_lane_bytes<W>(std::span<const W>(bad), BitOrder::msb_first), StructuralError);
}

TEST(Slab, TransposeSquareIsInvolution)
{
  std::mt19937_64 rng(15);
  std::array<std::uint64_t, 64> a;
  for (auto& v : a) v = rng();
  auto b = a;
  transpose_square(std::span<std::uint64_t, 64>(b));
  for (int i = 0; i < 64; i++) {
    for (int j = 0; j < 64; j++) EXPECT_EQ((b[i] >> j) & 1u, (a[j] >> i) & 1u);
  }
  transpose_square(std::span<std::uint64_t, 64>(b));
  EXPECT_EQ(a, b);
}

TEST(Slab, DumpHexListsRegisters)
{
  SlicedBlock<std::uint32_t> s(2);
  s[0] = 0xdeadbeef;
  s[1] = 1;
  EXPECT_EQ(dump_hex(s), "deadbeef\n00000001\n");
}

TEST(Slab, RegisterRingShiftsByOrigin)
{
  RegisterRing<std::uint32_t, 4> r(3);
  r[0] = 1;
  r[1] = 2;
  r[2] = 3;
  for (std::uint32_t k = 4; k < 20; k++) {
    r.advance(k);
    EXPECT_EQ(r[0], k - 2);
    EXPECT_EQ(r[2], k);
  }
}
