#include "support.hpp"

#include <gtest/gtest.h>

using namespace bsprng;

namespace {

aes::Block
block(const std::string& hex)
{
  return aes::make_block(from_hex(hex));
}

} // namespace

TEST(Aes, Fips197AppendixB)
{
  const auto ks = aes::key_expand(aes::make_key(from_hex("2b7e151628aed2a6abf7158809cf4f3c")));
  EXPECT_EQ(to_hex(aes::encrypt_block(ks, block("3243f6a8885a308d313198a2e0370734"))),
            "3925841d02dc09fbdc118597196a0b32");
}

TEST(Aes, Fips197AppendixC1)
{
  const auto ks = aes::key_expand(aes::make_key(from_hex("000102030405060708090a0b0c0d0e0f")));
  EXPECT_EQ(to_hex(aes::encrypt_block(ks, block("00112233445566778899aabbccddeeff"))),
            "69c4e0d86a7b0430d8cdb78070b4c55a");
}

TEST(Aes, KeyExpansionFirstAndLastRoundKeys)
{
  const auto ks = aes::key_expand(aes::make_key(from_hex("2b7e151628aed2a6abf7158809cf4f3c")));
  ASSERT_EQ(ks.size(), 11u);
  EXPECT_EQ(to_hex(ks[0]), "2b7e151628aed2a6abf7158809cf4f3c");
  EXPECT_EQ(to_hex(ks[1]), "a0fafe1788542cb123a339392a6c7605");
  EXPECT_EQ(to_hex(ks[10]), "d014f9a8c9ee2589e13f0cc8b6630ca6");
}

TEST(Aes, SboxTableMatchesFieldDefinition)
{
  for (int a = 0; a < 256; a++) {
    EXPECT_EQ(aes::sbox_table[a], testsupport::oracle::sbox(static_cast<std::uint8_t>(a))) << a;
  }
}

TEST(Aes, XtimeIsMultiplicationByTwo)
{
  for (int a = 0; a < 256; a++) {
    EXPECT_EQ(aes::xtime(static_cast<std::uint8_t>(a)), testsupport::oracle::gmul(static_cast<std::uint8_t>(a), 2));
  }
}

TEST(Aes, MixColumnsKnownColumnAndFieldModel)
{
  aes::Block s = block("db135345f20a225c01010101c6c6c6c6");
  aes::mix_columns(s);
  EXPECT_EQ(to_hex(s), "8e4da1bc9fdc589d01010101c6c6c6c6");

  using testsupport::oracle::gmul;
  std::mt19937_64 rng(61);
  for (int i = 0; i < 50; i++) {
    aes::Block in = aes::make_block(testsupport::random_bytes(rng, 16));
    aes::Block out = in;
    aes::mix_columns(out);
    for (int c = 0; c < 4; c++) {
      const auto* a = &in[4 * c];
      for (int r = 0; r < 4; r++) {
        const std::uint8_t e = gmul(a[r], 2) ^ gmul(a[(r + 1) % 4], 3) ^ a[(r + 2) % 4] ^ a[(r + 3) % 4];
        EXPECT_EQ(out[4 * c + r], e);
      }
    }
  }
}

TEST(Aes, ShiftRowsMovesRowRLeftByR)
{
  aes::Block s;
  for (int i = 0; i < 16; i++) s[i] = static_cast<std::uint8_t>(i);
  aes::shift_rows(s);
  EXPECT_EQ(to_hex(s), "00050a0f04090e03080d02070c01060b");
}

TEST(Aes, CounterBlockLayout)
{
  const aes::Nonce n = aes::make_nonce(from_hex("000102030405060708090a0b"));
  EXPECT_EQ(to_hex(aes::counter_block(n, 0x01020304)), "000102030405060708090a0b01020304");
}

TEST(Aes, InputSizeValidation)
{
  EXPECT_THROW(aes::make_key(Bytes(15)), ValidationError);
  EXPECT_THROW(aes::make_block(Bytes(17)), ValidationError);
  EXPECT_THROW(aes::make_nonce(Bytes(16)), ValidationError);
}
