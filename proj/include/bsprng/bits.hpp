#pragma once

#include <bsprng/error.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bsprng {

// Unpacked bit string: one element per bit, each 0 or 1.
using Bits = std::vector<std::uint8_t>;
using Bytes = std::vector<std::uint8_t>;

enum class BitOrder
{
  msb_first, // first bit is the most significant bit of the first byte
  lsb_first, // first bit is the least significant bit of the first byte
};

inline Bits
unpack_bits(std::span<const std::uint8_t> bytes, std::size_t nbits, BitOrder order)
{
  if (nbits > bytes.size() * 8) {
    throw RangeError("unpack_bits: " + std::to_string(nbits) + " bits requested from " +
                     std::to_string(bytes.size()) + " bytes");
  }
  Bits out(nbits);
  for (std::size_t i = 0; i < nbits; i++) {
    const unsigned shift = order == BitOrder::msb_first ? 7u - (i & 7u) : (i & 7u);
    out[i] = (bytes[i >> 3] >> shift) & 1u;
  }
  return out;
}

inline Bits
unpack_bits(std::span<const std::uint8_t> bytes, BitOrder order)
{
  return unpack_bits(bytes, bytes.size() * 8, order);
}

// Packs bits into bytes; a trailing partial byte is zero padded.
inline Bytes
pack_bits(std::span<const std::uint8_t> bits, BitOrder order)
{
  Bytes out((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); i++) {
    const unsigned shift = order == BitOrder::msb_first ? 7u - (i & 7u) : (i & 7u);
    out[i >> 3] |= static_cast<std::uint8_t>((bits[i] & 1u) << shift);
  }
  return out;
}

// Lowercase hex, no separators.
inline std::string
to_hex(std::span<const std::uint8_t> bytes)
{
  static constexpr char digits[] = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (const auto b : bytes) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 15]);
  }
  return s;
}

// Accepts upper or lower case; whitespace is not allowed.
inline Bytes
from_hex(std::string_view hex)
{
  auto nibble = [&](char c) -> std::uint8_t {
    if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
    throw ValidationError("invalid hex digit '" + std::string(1, c) + "'");
  };
  if (hex.size() % 2 != 0) {
    throw ValidationError("hex string has odd length " + std::to_string(hex.size()));
  }
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); i++) {
    out[i] = static_cast<std::uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
  }
  return out;
}

} // namespace bsprng
