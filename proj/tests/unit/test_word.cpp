#include "support.hpp"

#include <gtest/gtest.h>

using namespace bsprng;

template<typename W>
class WordTest : public ::testing::Test
{};

using Words = ::testing::Types<std::uint32_t, std::uint64_t, CountedWord<std::uint32_t>, CountedWord<std::uint64_t>>;
TYPED_TEST_SUITE(WordTest, Words);

TYPED_TEST(WordTest, LaneCountMatchesWidth)
{
  EXPECT_EQ(lanes_v<TypeParam>, sizeof(raw_t<TypeParam>) * 8);
}

TYPED_TEST(WordTest, BroadcastFillsEveryLane)
{
  using W = TypeParam;
  EXPECT_EQ(to_raw(broadcast<W>(true)), static_cast<raw_t<W>>(~raw_t<W>{ 0 }));
  EXPECT_EQ(to_raw(broadcast<W>(false)), raw_t<W>{ 0 });
}

TYPED_TEST(WordTest, SetAndReadLaneBits)
{
  using W = TypeParam;
  W w = zero_word<W>();
  for (std::size_t j = 0; j < lanes_v<W>; j += 3) set_lane_bit(w, j, true);
  for (std::size_t j = 0; j < lanes_v<W>; j++) EXPECT_EQ(lane_bit(w, j), j % 3 == 0) << j;
  set_lane_bit(w, 0, false);
  EXPECT_FALSE(lane_bit(w, 0));
}

TYPED_TEST(WordTest, SelectIsPerLaneMultiplexer)
{
  using W = TypeParam;
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; i++) {
    const auto s = static_cast<raw_t<W>>(rng()), a = static_cast<raw_t<W>>(rng()), b = static_cast<raw_t<W>>(rng());
    const W r = select(from_raw<W>(s), from_raw<W>(a), from_raw<W>(b));
    EXPECT_EQ(to_raw(r), static_cast<raw_t<W>>((s & a) | (~s & b)));
  }
}

TEST(CountedWord, CountsEachOperatorKind)
{
  using C = CountedWord<std::uint64_t>;
  const auto before = op_counters;
  C a{ 0xf0 }, b{ 0x3c };
  C x = a ^ b;
  x = x & a;
  x = x | b;
  x = ~x;
  x ^= a;
  EXPECT_EQ(op_counters.xor_ops - before.xor_ops, 2u);
  EXPECT_EQ(op_counters.and_ops - before.and_ops, 1u);
  EXPECT_EQ(op_counters.or_ops - before.or_ops, 1u);
  EXPECT_EQ(op_counters.not_ops - before.not_ops, 1u);
  EXPECT_EQ(x.raw, static_cast<std::uint64_t>(~(((0xf0ull ^ 0x3c) & 0xf0) | 0x3c)) ^ 0xf0);
}

TEST(CountedWord, ConversionsAreNotCounted)
{
  using C = CountedWord<std::uint32_t>;
  const auto before = op_counters.total();
  C w = from_raw<C>(5);
  set_lane_bit(w, 4, true);
  (void)lane_bit(w, 4);
  (void)to_raw(w);
  (void)broadcast<C>(true);
  EXPECT_EQ(op_counters.total(), before);
}
