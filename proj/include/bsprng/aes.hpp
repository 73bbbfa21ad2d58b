#pragma once

#include <bsprng/bits.hpp>
#include <bsprng/error.hpp>

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

// Scalar AES-128: byte-serial rounds on a 16-byte state (FIPS-197 column-major
// order, byte k = row k % 4, column k / 4). The only table is the 256-entry
// S-box; there are no combined round tables.
namespace bsprng::aes {

inline constexpr std::size_t block_bytes = 16;
inline constexpr std::size_t key_bytes = 16;
inline constexpr std::size_t rounds = 10;

using Block = std::array<std::uint8_t, block_bytes>;
using Key = std::array<std::uint8_t, key_bytes>;

inline constexpr std::array<std::uint8_t, 256> sbox_table{
  0x63, 0x7c, 0x77, 0x7b, 0xf2, 0x6b, 0x6f, 0xc5, 0x30, 0x01, 0x67, 0x2b, 0xfe, 0xd7, 0xab, 0x76,
  0xca, 0x82, 0xc9, 0x7d, 0xfa, 0x59, 0x47, 0xf0, 0xad, 0xd4, 0xa2, 0xaf, 0x9c, 0xa4, 0x72, 0xc0,
  0xb7, 0xfd, 0x93, 0x26, 0x36, 0x3f, 0xf7, 0xcc, 0x34, 0xa5, 0xe5, 0xf1, 0x71, 0xd8, 0x31, 0x15,
  0x04, 0xc7, 0x23, 0xc3, 0x18, 0x96, 0x05, 0x9a, 0x07, 0x12, 0x80, 0xe2, 0xeb, 0x27, 0xb2, 0x75,
  0x09, 0x83, 0x2c, 0x1a, 0x1b, 0x6e, 0x5a, 0xa0, 0x52, 0x3b, 0xd6, 0xb3, 0x29, 0xe3, 0x2f, 0x84,
  0x53, 0xd1, 0x00, 0xed, 0x20, 0xfc, 0xb1, 0x5b, 0x6a, 0xcb, 0xbe, 0x39, 0x4a, 0x4c, 0x58, 0xcf,
  0xd0, 0xef, 0xaa, 0xfb, 0x43, 0x4d, 0x33, 0x85, 0x45, 0xf9, 0x02, 0x7f, 0x50, 0x3c, 0x9f, 0xa8,
  0x51, 0xa3, 0x40, 0x8f, 0x92, 0x9d, 0x38, 0xf5, 0xbc, 0xb6, 0xda, 0x21, 0x10, 0xff, 0xf3, 0xd2,
  0xcd, 0x0c, 0x13, 0xec, 0x5f, 0x97, 0x44, 0x17, 0xc4, 0xa7, 0x7e, 0x3d, 0x64, 0x5d, 0x19, 0x73,
  0x60, 0x81, 0x4f, 0xdc, 0x22, 0x2a, 0x90, 0x88, 0x46, 0xee, 0xb8, 0x14, 0xde, 0x5e, 0x0b, 0xdb,
  0xe0, 0x32, 0x3a, 0x0a, 0x49, 0x06, 0x24, 0x5c, 0xc2, 0xd3, 0xac, 0x62, 0x91, 0x95, 0xe4, 0x79,
  0xe7, 0xc8, 0x37, 0x6d, 0x8d, 0xd5, 0x4e, 0xa9, 0x6c, 0x56, 0xf4, 0xea, 0x65, 0x7a, 0xae, 0x08,
  0xba, 0x78, 0x25, 0x2e, 0x1c, 0xa6, 0xb4, 0xc6, 0xe8, 0xdd, 0x74, 0x1f, 0x4b, 0xbd, 0x8b, 0x8a,
  0x70, 0x3e, 0xb5, 0x66, 0x48, 0x03, 0xf6, 0x0e, 0x61, 0x35, 0x57, 0xb9, 0x86, 0xc1, 0x1d, 0x9e,
  0xe1, 0xf8, 0x98, 0x11, 0x69, 0xd9, 0x8e, 0x94, 0x9b, 0x1e, 0x87, 0xe9, 0xce, 0x55, 0x28, 0xdf,
  0x8c, 0xa1, 0x89, 0x0d, 0xbf, 0xe6, 0x42, 0x68, 0x41, 0x99, 0x2d, 0x0f, 0xb0, 0x54, 0xbb, 0x16,
};

struct KeySchedule
{
  std::array<Block, rounds + 1> round_keys{};

  std::size_t size() const noexcept { return round_keys.size(); }
  const Block& operator[](std::size_t r) const noexcept { return round_keys[r]; }
};

inline Key
make_key(std::span<const std::uint8_t> bytes)
{
  if (bytes.size() != key_bytes) {
    throw ValidationError("AES-128 key must be 16 bytes, got " + std::to_string(bytes.size()));
  }
  Key k{};
  std::copy(bytes.begin(), bytes.end(), k.begin());
  return k;
}

inline Block
make_block(std::span<const std::uint8_t> bytes)
{
  if (bytes.size() != block_bytes) {
    throw ValidationError("AES block must be 16 bytes, got " + std::to_string(bytes.size()));
  }
  Block b{};
  std::copy(bytes.begin(), bytes.end(), b.begin());
  return b;
}

constexpr std::uint8_t
xtime(std::uint8_t b) noexcept
{
  return static_cast<std::uint8_t>((b << 1) ^ ((b >> 7) * 0x1b));
}

inline KeySchedule
key_expand(const Key& key) noexcept
{
  KeySchedule ks;
  std::array<std::uint8_t, 4 * 4 * (rounds + 1)> w{};
  std::copy(key.begin(), key.end(), w.begin());
  std::uint8_t rcon = 1;
  for (std::size_t i = 4; i < 4 * (rounds + 1); i++) {
    std::array<std::uint8_t, 4> t{ w[4 * i - 4], w[4 * i - 3], w[4 * i - 2], w[4 * i - 1] };
    if (i % 4 == 0) {
      t = { static_cast<std::uint8_t>(sbox_table[t[1]] ^ rcon), sbox_table[t[2]], sbox_table[t[3]],
            sbox_table[t[0]] };
      rcon = xtime(rcon);
    }
    for (std::size_t k = 0; k < 4; k++) w[4 * i + k] = w[4 * (i - 4) + k] ^ t[k];
  }
  for (std::size_t r = 0; r <= rounds; r++) {
    std::copy_n(w.begin() + static_cast<std::ptrdiff_t>(16 * r), 16, ks.round_keys[r].begin());
  }
  return ks;
}

inline void
sub_bytes(Block& s) noexcept
{
  for (auto& b : s) b = sbox_table[b];
}

// Row r rotates left by r: new (r, c) = old (r, c + r).
inline void
shift_rows(Block& s) noexcept
{
  const Block t = s;
  for (std::size_t c = 0; c < 4; c++) {
    for (std::size_t r = 0; r < 4; r++) s[4 * c + r] = t[4 * ((c + r) % 4) + r];
  }
}

inline void
mix_columns(Block& s) noexcept
{
  for (std::size_t c = 0; c < 4; c++) {
    std::uint8_t* a = &s[4 * c];
    const std::uint8_t a0 = a[0], a1 = a[1], a2 = a[2], a3 = a[3];
    const std::uint8_t t = a0 ^ a1 ^ a2 ^ a3;
    a[0] = static_cast<std::uint8_t>(a0 ^ t ^ xtime(a0 ^ a1));
    a[1] = static_cast<std::uint8_t>(a1 ^ t ^ xtime(a1 ^ a2));
    a[2] = static_cast<std::uint8_t>(a2 ^ t ^ xtime(a2 ^ a3));
    a[3] = static_cast<std::uint8_t>(a3 ^ t ^ xtime(a3 ^ a0));
  }
}

inline void
add_round_key(Block& s, const Block& rk) noexcept
{
  for (std::size_t i = 0; i < block_bytes; i++) s[i] ^= rk[i];
}

// One full middle round (final = true drops MixColumns).
inline void
round(Block& s, const Block& rk, bool final = false) noexcept
{
  sub_bytes(s);
  shift_rows(s);
  if (!final) mix_columns(s);
  add_round_key(s, rk);
}

inline Block
encrypt_block(const KeySchedule& ks, Block s) noexcept
{
  add_round_key(s, ks[0]);
  for (std::size_t r = 1; r < rounds; r++) round(s, ks[r]);
  round(s, ks[rounds], true);
  return s;
}

// Counter block: 12-byte nonce followed by the 32-bit big-endian counter.
inline Block
counter_block(std::span<const std::uint8_t, 12> nonce, std::uint32_t counter) noexcept
{
  Block b{};
  std::copy(nonce.begin(), nonce.end(), b.begin());
  b[12] = static_cast<std::uint8_t>(counter >> 24);
  b[13] = static_cast<std::uint8_t>(counter >> 16);
  b[14] = static_cast<std::uint8_t>(counter >> 8);
  b[15] = static_cast<std::uint8_t>(counter);
  return b;
}

} // namespace bsprng::aes
