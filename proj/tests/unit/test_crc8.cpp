#include "support.hpp"

#include <gtest/gtest.h>

using namespace bsprng;

namespace {
const Bytes check_message{ '1', '2', '3', '4', '5', '6', '7', '8', '9' };
}

TEST(Crc8, CheckValueOfWorkedExample)
{
  EXPECT_EQ(crc8_scalar(CrcSpec{}, check_message), 0xf4);
}

TEST(Crc8, OtherCatalogueCheckValues)
{
  // CRC-8/MAXIM-DOW: poly 0x31, reflected, check 0xa1
  CrcSpec maxim{ 0x31, 0x00, true, true, 0x00 };
  EXPECT_EQ(crc8_scalar(maxim, check_message), 0xa1);
  // CRC-8/I-432-1 (ITU): poly 0x07, xorout 0x55, check 0xa1
  CrcSpec itu{ 0x07, 0x00, false, false, 0x55 };
  EXPECT_EQ(crc8_scalar(itu, check_message), 0xa1);
  // CRC-8/CDMA2000: poly 0x9b, init 0xff, check 0xda
  CrcSpec cdma{ 0x9b, 0xff, false, false, 0x00 };
  EXPECT_EQ(crc8_scalar(cdma, check_message), 0xda);
}

TEST(Crc8, ScalarMatchesTableDriven)
{
  std::mt19937_64 rng(31);
  for (int i = 0; i < 200; i++) {
    const auto poly = static_cast<std::uint8_t>(rng() | 1);
    const auto init = static_cast<std::uint8_t>(rng());
    const auto msg = testsupport::random_bytes(rng, rng() % 50);
    EXPECT_EQ(crc8_scalar(CrcSpec{ poly, init }, msg), testsupport::oracle::crc8_table(poly, init, msg));
  }
}

template<typename W>
class Crc8Sliced : public ::testing::Test
{};
using CrcWords = ::testing::Types<std::uint32_t, std::uint64_t>;
TYPED_TEST_SUITE(Crc8Sliced, CrcWords);

TYPED_TEST(Crc8Sliced, AllLanesOfWorkedExample)
{
  using W = TypeParam;
  const std::vector<Bytes> msgs(lanes_v<W>, check_message);
  for (auto c : crc8_sliced<W>(CrcSpec{}, msgs)) EXPECT_EQ(c, 0xf4);
}

TYPED_TEST(Crc8Sliced, MatchesScalarForRandomMessagesAndSpecs)
{
  using W = TypeParam;
  std::mt19937_64 rng(32);
  for (int round = 0; round < 20; round++) {
    CrcSpec spec{ static_cast<std::uint8_t>(rng() | 1), static_cast<std::uint8_t>(rng()), (rng() & 1) != 0,
                  (rng() & 1) != 0, static_cast<std::uint8_t>(rng()) };
    const std::size_t len = rng() % 64, count = 1 + rng() % lanes_v<W>;
    std::vector<Bytes> msgs;
    for (std::size_t j = 0; j < count; j++) msgs.push_back(testsupport::random_bytes(rng, len));
    const auto got = crc8_sliced<W>(spec, msgs);
    ASSERT_EQ(got.size(), count);
    for (std::size_t j = 0; j < count; j++) EXPECT_EQ(got[j], crc8_scalar(spec, msgs[j]));
  }
}

TYPED_TEST(Crc8Sliced, BatchHandlesMoreMessagesThanLanes)
{
  using W = TypeParam;
  std::mt19937_64 rng(33);
  std::vector<Bytes> msgs;
  for (std::size_t j = 0; j < 3 * lanes_v<W> + 5; j++) msgs.push_back(testsupport::random_bytes(rng, 12));
  const auto got = crc8_batch<W>(CrcSpec{}, msgs);
  for (std::size_t j = 0; j < msgs.size(); j++) EXPECT_EQ(got[j], crc8_scalar(CrcSpec{}, msgs[j]));
}

TYPED_TEST(Crc8Sliced, RejectsRaggedAndOversizedBatches)
{
  using W = TypeParam;
  std::vector<Bytes> ragged{ Bytes(4), Bytes(5) };
  EXPECT_THROW(crc8_sliced<W>(CrcSpec{}, ragged), StructuralError);
  std::vector<Bytes> many(lanes_v<W> + 1, Bytes(2));
  EXPECT_THROW(crc8_sliced<W>(CrcSpec{}, many), StructuralError);
  EXPECT_THROW(crc8_sliced<W>(CrcSpec{ 0 }, std::vector<Bytes>{ Bytes(1) }), ValidationError);
}
