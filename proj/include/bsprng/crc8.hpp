#pragma once

#include <bsprng/bitslab.hpp>
#include <bsprng/error.hpp>
#include <bsprng/word.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

// CRC-8, bit-serial and bitsliced.
//
// Message bits are consumed MSB-first within each byte unless `reflect_in` is
// set. The register is the usual left-shifting CRC: the top bit plus the input
// bit decides whether the polynomial is XORed in.
namespace bsprng {

struct CrcSpec
{
  std::uint8_t polynomial = 0x07;
  std::uint8_t init = 0x00;
  bool reflect_in = false;
  bool reflect_out = false;
  std::uint8_t xor_out = 0x00;

  void validate() const
  {
    if (polynomial == 0) throw ValidationError("CRC polynomial must be nonzero");
  }
};

namespace detail {

constexpr std::uint8_t
reflect8(std::uint8_t v) noexcept
{
  std::uint8_t r = 0;
  for (int i = 0; i < 8; i++) r |= static_cast<std::uint8_t>(((v >> i) & 1u) << (7 - i));
  return r;
}

} // namespace detail

inline std::uint8_t
crc8_scalar(const CrcSpec& spec, std::span<const std::uint8_t> message)
{
  spec.validate();
  std::uint8_t crc = spec.init;
  for (const std::uint8_t byte : message) {
    for (int k = 0; k < 8; k++) {
      const int bit = spec.reflect_in ? (byte >> k) & 1 : (byte >> (7 - k)) & 1;
      const int fb = ((crc >> 7) & 1) ^ bit;
      crc = static_cast<std::uint8_t>(crc << 1);
      if (fb) crc ^= spec.polynomial;
    }
  }
  if (spec.reflect_out) crc = detail::reflect8(crc);
  return static_cast<std::uint8_t>(crc ^ spec.xor_out);
}

// Up to `lanes` messages of equal length at once. Ring register r holds CRC
// bit 7 - r of every lane, so the register shift is an origin move and the
// polynomial becomes a fixed set of word XORs.
template<SliceWord W>
std::vector<std::uint8_t>
crc8_sliced(const CrcSpec& spec, std::span<const std::vector<std::uint8_t>> messages)
{
  constexpr std::size_t lanes = lanes_v<W>;
  using R = raw_t<W>;
  spec.validate();
  if (messages.size() > lanes) {
    throw StructuralError(std::to_string(messages.size()) + " messages for " +
                          std::to_string(lanes) + " lanes");
  }
  if (messages.empty()) return {};
  const std::size_t len = messages[0].size();
  for (std::size_t j = 1; j < messages.size(); j++) {
    if (messages[j].size() != len) {
      throw StructuralError("message " + std::to_string(j) + " has " +
                            std::to_string(messages[j].size()) + " bytes, message 0 has " +
                            std::to_string(len));
    }
  }

  RegisterRing<W> ring(8);
  for (std::size_t r = 0; r < 8; r++) ring[r] = broadcast<W>((spec.init >> (7 - r)) & 1u);

  // Byte column -> 8 sliced input words (word k = message bit k of the byte).
  std::array<R, lanes> tile{};
  for (std::size_t pos = 0; pos < len; pos++) {
    tile.fill(0);
    for (std::size_t j = 0; j < messages.size(); j++) {
      std::uint8_t b = messages[j][pos];
      if (!spec.reflect_in) b = detail::reflect8(b);
      tile[j] = b;
    }
    transpose_square(std::span<R, lanes>(tile));
    for (std::size_t k = 0; k < 8; k++) {
      const W fb = ring[0] ^ from_raw<W>(tile[k]);
      ring.advance((spec.polynomial & 1u) ? fb : zero_word<W>());
      for (unsigned i = 1; i < 8; i++) {
        if ((spec.polynomial >> i) & 1u) ring[7 - i] ^= fb;
      }
    }
  }

  std::vector<std::uint8_t> out(messages.size());
  for (std::size_t j = 0; j < messages.size(); j++) {
    std::uint8_t crc = 0;
    for (std::size_t r = 0; r < 8; r++) {
      crc |= static_cast<std::uint8_t>(lane_bit(ring[r], j) << (7 - r));
    }
    if (spec.reflect_out) crc = detail::reflect8(crc);
    out[j] = static_cast<std::uint8_t>(crc ^ spec.xor_out);
  }
  return out;
}

// Any number of equal-length messages, processed `lanes` at a time.
template<SliceWord W>
std::vector<std::uint8_t>
crc8_batch(const CrcSpec& spec, std::span<const std::vector<std::uint8_t>> messages)
{
  std::vector<std::uint8_t> out;
  out.reserve(messages.size());
  for (std::size_t base = 0; base < messages.size(); base += lanes_v<W>) {
    const auto n = std::min(lanes_v<W>, messages.size() - base);
    const auto part = crc8_sliced<W>(spec, messages.subspan(base, n));
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

} // namespace bsprng
