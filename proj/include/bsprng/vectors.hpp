#pragma once

#include <bsprng/aes_ctr.hpp>
#include <bsprng/bits.hpp>
#include <bsprng/bitslab.hpp>
#include <bsprng/error.hpp>
#include <bsprng/grain.hpp>
#include <bsprng/mickey.hpp>
#include <bsprng/seedgen.hpp>

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

// Known-answer vectors and their verification against every engine.
//
// Vector file format, one vector per line, '#' starts a comment:
//
//   key=<hex> iv=<hex> ks=<hex> [ivbits=<n>]
//
// For aes-ctr, iv is the 16-byte initial counter block (12-byte nonce and
// 32-bit big-endian counter) and ks the keystream from that block on, so a
// FIPS-197 example is written with iv = plaintext and ks = ciphertext.
namespace bsprng::vectors {

struct Vector
{
  seedgen::Algo algo;
  std::string key;
  std::string iv;
  std::string keystream;
  std::optional<std::size_t> iv_bits;
  std::string source;
};

inline const std::vector<Vector>&
embedded()
{
  using seedgen::Algo;
  static const std::vector<Vector> v{
    { Algo::mickey, "123456789abcdef01234", "21436587", "9821e10c5ed28d32bbc3d1fb15e93a15", {},
      "MICKEY 2.0 test vector 1" },
    { Algo::mickey, "f11a5627ce43b61f8912", "9c532f8ac3ea4b2ea0f5", "21a0436619cb9f3f6f1fb303f56a09a9", {},
      "MICKEY 2.0 test vector 2" },
    { Algo::mickey, "3b80fc8c475fc270fa26", "", "6b67686f570e875ffb2592af90241b1c", {},
      "MICKEY 2.0 test vector 3 (empty IV)" },
    { Algo::grain, "00000000000000000000", "0000000000000000", "dee931cf1662a72f77d0", {},
      "Grain v1 test vector 1" },
    { Algo::grain, "0123456789abcdef1234", "0123456789abcdef", "7f362bd3f7abae203664", {},
      "Grain v1 test vector 2" },
    { Algo::aes_ctr, "2b7e151628aed2a6abf7158809cf4f3c", "3243f6a8885a308d313198a2e0370734",
      "3925841d02dc09fbdc118597196a0b32", {}, "FIPS-197 Appendix B" },
    { Algo::aes_ctr, "000102030405060708090a0b0c0d0e0f", "00112233445566778899aabbccddeeff",
      "69c4e0d86a7b0430d8cdb78070b4c55a", {}, "FIPS-197 Appendix C.1" },
  };
  return v;
}

inline std::vector<Vector>
embedded(seedgen::Algo algo)
{
  std::vector<Vector> out;
  for (const auto& v : embedded()) {
    if (v.algo == algo) out.push_back(v);
  }
  return out;
}

inline std::vector<Vector>
parse(std::istream& in, seedgen::Algo algo, const std::string& source = "file")
{
  std::vector<Vector> out;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); lineno++) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string field;
    Vector v{ algo, {}, {}, {}, {}, source + ":" + std::to_string(lineno) };
    bool any = false, have_key = false, have_iv = false, have_ks = false;
    while (fields >> field) {
      any = true;
      const auto eq = field.find('=');
      if (eq == std::string::npos) {
        throw ValidationError(v.source + ": expected name=value, got '" + field + "'");
      }
      const std::string name = field.substr(0, eq), value = field.substr(eq + 1);
      if (name == "key") {
        v.key = value;
        have_key = true;
      } else if (name == "iv") {
        v.iv = value;
        have_iv = true;
      } else if (name == "ks") {
        v.keystream = value;
        have_ks = true;
      } else if (name == "ivbits") {
        try {
          v.iv_bits = std::stoul(value);
        } catch (const std::exception&) {
          throw ValidationError(v.source + ": bad ivbits '" + value + "'");
        }
      } else {
        throw ValidationError(v.source + ": unknown field '" + name + "'");
      }
    }
    if (!any) continue;
    if (!have_key || !have_iv || !have_ks) throw ValidationError(v.source + ": need key=, iv= and ks=");
    from_hex(v.key);
    from_hex(v.iv);
    from_hex(v.keystream);
    out.push_back(std::move(v));
  }
  return out;
}

inline std::vector<Vector>
parse(std::string_view text, seedgen::Algo algo, const std::string& source = "text")
{
  std::istringstream in{ std::string(text) };
  return parse(in, algo, source);
}

struct Result
{
  Vector vector;
  std::string scalar;     // keystream from the scalar engine
  bool scalar_ok = false;
  bool sliced32_ok = false; // every lane
  bool sliced64_ok = false; // every lane

  bool ok() const noexcept { return scalar_ok && sliced32_ok && sliced64_ok; }
};

namespace detail {

template<SliceWord W>
bool
sliced_all_lanes(const Vector& v, const Bytes& key, const Bytes& iv, const Bytes& expected)
{
  constexpr std::size_t L = lanes_v<W>;
  const std::size_t nbytes = expected.size();
  switch (v.algo) {
    case seedgen::Algo::mickey: {
      const std::vector<mickey::KeyIv> m(L, mickey::KeyIv::make(key, iv, v.iv_bits));
      auto st = mickey::sliced_init<W>(m);
      const auto ks = mickey::sliced_keystream<W>(st, nbytes * 8);
      for (std::size_t j = 0; j < L; j++) {
        if (pack_bits(extract_lane(ks, j), BitOrder::msb_first) != expected) return false;
      }
      return true;
    }
    case seedgen::Algo::grain: {
      const std::vector<grain::KeyIv> m(L, grain::KeyIv::make(key, iv));
      auto st = grain::sliced_init<W>(m);
      const auto ks = grain::sliced_keystream<W>(st, nbytes * 8);
      for (std::size_t j = 0; j < L; j++) {
        if (pack_bits(extract_lane(ks, j), BitOrder::lsb_first) != expected) return false;
      }
      return true;
    }
    case seedgen::Algo::aes_ctr: {
      const auto k = aes::key_expand(aes::make_key(key));
      const std::size_t nblocks = (nbytes + 15) / 16;
      const aes::Block first = aes::make_block(iv);
      const std::uint32_t ctr0 = (std::uint32_t{ first[12] } << 24) | (std::uint32_t{ first[13] } << 16) |
                                 (std::uint32_t{ first[14] } << 8) | first[15];
      aes::detail::check_counter_range(ctr0, nblocks);
      for (std::size_t b = 0; b < nblocks; b++) {
        aes::Block in = first;
        const std::uint32_t c = ctr0 + static_cast<std::uint32_t>(b);
        in[12] = static_cast<std::uint8_t>(c >> 24);
        in[13] = static_cast<std::uint8_t>(c >> 16);
        in[14] = static_cast<std::uint8_t>(c >> 8);
        in[15] = static_cast<std::uint8_t>(c);
        const std::vector<aes::Block> blocks(L, in);
        const auto out = aes::encrypt_blocks_sliced<W>(k, blocks);
        const std::size_t n = std::min<std::size_t>(16, nbytes - 16 * b);
        for (const auto& o : out) {
          if (!std::equal(o.begin(), o.begin() + static_cast<std::ptrdiff_t>(n),
                          expected.begin() + static_cast<std::ptrdiff_t>(16 * b))) {
            return false;
          }
        }
      }
      return true;
    }
    case seedgen::Algo::lfsr: break;
  }
  throw ValidationError("no known-answer vectors for this algorithm");
}

} // namespace detail

inline Result
verify(const Vector& v)
{
  const Bytes key = from_hex(v.key), iv = from_hex(v.iv), expected = from_hex(v.keystream);
  Result r{ v, {}, false, false, false };
  Bytes got;
  switch (v.algo) {
    case seedgen::Algo::mickey: {
      auto st = mickey::scalar_init(mickey::KeyIv::make(key, iv, v.iv_bits));
      got = mickey::scalar_keystream_bytes(st, expected.size());
      break;
    }
    case seedgen::Algo::grain: {
      auto st = grain::scalar_init(grain::KeyIv::make(key, iv));
      got = grain::scalar_keystream_bytes(st, expected.size());
      break;
    }
    case seedgen::Algo::aes_ctr: {
      const aes::Block first = aes::make_block(iv);
      const aes::Nonce nonce = aes::make_nonce(std::span<const std::uint8_t>(first.data(), 12));
      const std::uint32_t ctr0 = (std::uint32_t{ first[12] } << 24) | (std::uint32_t{ first[13] } << 16) |
                                 (std::uint32_t{ first[14] } << 8) | first[15];
      got = aes::ctr_keystream_scalar(aes::make_key(key), nonce, expected.size(), ctr0);
      break;
    }
    case seedgen::Algo::lfsr: throw ValidationError("no known-answer vectors for lfsr");
  }
  r.scalar = to_hex(got);
  r.scalar_ok = got == expected;
  r.sliced32_ok = detail::sliced_all_lanes<std::uint32_t>(v, key, iv, expected);
  r.sliced64_ok = detail::sliced_all_lanes<std::uint64_t>(v, key, iv, expected);
  return r;
}

} // namespace bsprng::vectors
