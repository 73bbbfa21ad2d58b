#pragma once

#include <bsprng/bits.hpp>
#include <bsprng/bitslab.hpp>
#include <bsprng/error.hpp>
#include <bsprng/word.hpp>

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

// Grain v1 (80-bit key, 64-bit IV).
//
// LFSR s and NFSR b, 80 bits each, both shifted every clock (s_i <- s_{i+1},
// new bit enters at 79). Key and IV bytes are loaded LSB-first and keystream
// bytes are packed LSB-first, as in the eSTREAM reference code; the
// published test vectors are expressed in that order.
namespace bsprng::grain {

inline constexpr std::size_t register_bits = 80;
inline constexpr std::size_t key_bytes = 10;
inline constexpr std::size_t iv_bytes = 8;
inline constexpr std::size_t init_clocks = 160;

struct Constants
{
  // s_{i+80} = XOR of s_{i+t}
  std::array<std::size_t, 6> lfsr_taps{ 0, 13, 23, 38, 51, 62 };
  // linear part of g: b_{i+80} = s_i + XOR of b_{i+t} + non-linear terms
  std::array<std::size_t, 11> nfsr_linear_taps{ 0, 9, 14, 21, 28, 33, 37, 45, 52, 60, 62 };
  // non-linear monomials of g
  std::vector<std::vector<std::size_t>> nfsr_products{
    { 63, 60 },         { 37, 33 },         { 15, 9 },
    { 60, 52, 45 },     { 33, 28, 21 },     { 63, 45, 28, 9 },
    { 60, 52, 37, 33 }, { 63, 60, 21, 15 }, { 63, 60, 52, 45, 37 },
    { 33, 28, 21, 15, 9 }, { 52, 45, 37, 33, 28, 21 },
  };
  // filter h(x0..x4) inputs: s3, s25, s46, s64 and b63
  std::array<std::size_t, 4> filter_lfsr_taps{ 3, 25, 46, 64 };
  std::size_t filter_nfsr_tap = 63;
  // NFSR bits added to the filter output
  std::array<std::size_t, 7> output_taps{ 1, 2, 4, 10, 31, 43, 56 };
};

inline const Constants&
grain_constants()
{
  static const Constants c{};
  return c;
}

struct KeyIv
{
  Bytes key; // 10 bytes
  Bytes iv;  // 8 bytes

  static KeyIv make(Bytes key, Bytes iv)
  {
    KeyIv k{ std::move(key), std::move(iv) };
    k.validate();
    return k;
  }

  void validate() const
  {
    if (key.size() != key_bytes) {
      throw ValidationError("Grain key must be 80 bits, got " + std::to_string(key.size() * 8));
    }
    if (iv.size() != iv_bytes) {
      throw ValidationError("Grain IV must be 64 bits, got " + std::to_string(iv.size() * 8));
    }
  }
};

// Row-major packed registers; bit i of the register is bit i % 64 of word i / 64.
struct ScalarState
{
  std::array<std::uint64_t, 2> lfsr{};
  std::array<std::uint64_t, 2> nfsr{};
  std::uint64_t clocks = 0; // number of clocks applied since loading

  template<std::size_t I>
  static constexpr std::uint64_t bit(const std::array<std::uint64_t, 2>& r) noexcept
  {
    return (r[I / 64] >> (I % 64)) & 1u;
  }

  bool lfsr_bit(std::size_t i) const noexcept { return (lfsr[i / 64] >> (i % 64)) & 1u; }
  bool nfsr_bit(std::size_t i) const noexcept { return (nfsr[i / 64] >> (i % 64)) & 1u; }

  friend bool operator==(const ScalarState& a, const ScalarState& b) noexcept
  {
    return a.lfsr == b.lfsr && a.nfsr == b.nfsr;
  }
};

namespace detail {

inline void
shift_in(std::array<std::uint64_t, 2>& r, std::uint64_t incoming) noexcept
{
  r[0] = (r[0] >> 1) | (r[1] << 63);
  r[1] = ((r[1] >> 1) | (incoming << 15)) & 0xffff;
}

// One clock; returns the pre-output bit z. During initialisation z is fed
// back into both registers.
inline std::uint64_t
clock(ScalarState& st, bool initialising) noexcept
{
  using S = ScalarState;
  const auto& s = st.lfsr;
  const auto& b = st.nfsr;

  const std::uint64_t x0 = S::bit<3>(s), x1 = S::bit<25>(s), x2 = S::bit<46>(s),
                      x3 = S::bit<64>(s), x4 = S::bit<63>(b);
  const std::uint64_t h = x1 ^ x4 ^ (x0 & x3) ^ (x2 & x3) ^ (x3 & x4) ^ (x0 & x1 & x2) ^
                          (x0 & x2 & x3) ^ (x0 & x2 & x4) ^ (x1 & x2 & x4) ^ (x2 & x3 & x4);
  const std::uint64_t z = h ^ S::bit<1>(b) ^ S::bit<2>(b) ^ S::bit<4>(b) ^ S::bit<10>(b) ^
                          S::bit<31>(b) ^ S::bit<43>(b) ^ S::bit<56>(b);

  std::uint64_t ls = S::bit<62>(s) ^ S::bit<51>(s) ^ S::bit<38>(s) ^ S::bit<23>(s) ^
                     S::bit<13>(s) ^ S::bit<0>(s);

  const std::uint64_t b0 = S::bit<0>(b), b9 = S::bit<9>(b), b14 = S::bit<14>(b),
                      b15 = S::bit<15>(b), b21 = S::bit<21>(b), b28 = S::bit<28>(b),
                      b33 = S::bit<33>(b), b37 = S::bit<37>(b), b45 = S::bit<45>(b),
                      b52 = S::bit<52>(b), b60 = S::bit<60>(b), b62 = S::bit<62>(b),
                      b63 = S::bit<63>(b);
  std::uint64_t nb = S::bit<0>(s) ^ b62 ^ b60 ^ b52 ^ b45 ^ b37 ^ b33 ^ b28 ^ b21 ^ b14 ^ b9 ^
                     b0 ^ (b63 & b60) ^ (b37 & b33) ^ (b15 & b9) ^ (b60 & b52 & b45) ^
                     (b33 & b28 & b21) ^ (b63 & b45 & b28 & b9) ^ (b60 & b52 & b37 & b33) ^
                     (b63 & b60 & b21 & b15) ^ (b63 & b60 & b52 & b45 & b37) ^
                     (b33 & b28 & b21 & b15 & b9) ^ (b52 & b45 & b37 & b33 & b28 & b21);
  if (initialising) {
    ls ^= z;
    nb ^= z;
  }
  shift_in(st.lfsr, ls);
  shift_in(st.nfsr, nb);
  ++st.clocks;
  return z;
}

} // namespace detail

inline ScalarState
scalar_load(const KeyIv& kiv)
{
  kiv.validate();
  ScalarState st;
  for (std::size_t i = 0; i < key_bytes; i++) {
    st.nfsr[i / 8] |= std::uint64_t{ kiv.key[i] } << (8 * (i % 8));
  }
  for (std::size_t i = 0; i < iv_bytes; i++) st.lfsr[0] |= std::uint64_t{ kiv.iv[i] } << (8 * i);
  st.lfsr[1] = 0xffff; // s64..s79 = 1
  return st;
}

inline ScalarState
scalar_init(const KeyIv& kiv)
{
  ScalarState st = scalar_load(kiv);
  for (std::size_t i = 0; i < init_clocks; i++) detail::clock(st, true);
  return st;
}

inline bool
scalar_next_bit(ScalarState& st) noexcept
{
  return detail::clock(st, false) & 1u;
}

inline Bits
scalar_keystream(ScalarState& st, std::size_t nbits)
{
  Bits out(nbits);
  for (auto& b : out) b = scalar_next_bit(st);
  return out;
}

// First generated bit is the least significant bit of the first byte.
inline void
scalar_keystream_bytes(ScalarState& st, std::span<std::uint8_t> out) noexcept
{
  for (auto& byte : out) {
    std::uint8_t v = 0;
    for (int j = 0; j < 8; j++) v |= static_cast<std::uint8_t>(scalar_next_bit(st) << j);
    byte = v;
  }
}

inline Bytes
scalar_keystream_bytes(ScalarState& st, std::size_t nbytes)
{
  Bytes out(nbytes);
  scalar_keystream_bytes(st, std::span<std::uint8_t>(out));
  return out;
}

// W parallel Grain instances. Both registers live in register rings, so the
// per-clock shift is an origin move; both registers clock every cycle, so no
// select masks are involved.
template<SliceWord W>
class SlicedState
{
public:
  static constexpr std::size_t lanes = lanes_v<W>;

  SlicedState()
    : lfsr_(register_bits)
    , nfsr_(register_bits)
  {
  }

  RegisterRing<W>& lfsr() noexcept { return lfsr_; }
  RegisterRing<W>& nfsr() noexcept { return nfsr_; }
  const RegisterRing<W>& lfsr() const noexcept { return lfsr_; }
  const RegisterRing<W>& nfsr() const noexcept { return nfsr_; }

  template<bool Initialising>
  W clock() noexcept
  {
    const auto& s = lfsr_;
    const auto& b = nfsr_;

    const W x0 = s[3], x1 = s[25], x2 = s[46], x3 = s[64], x4 = b[63];
    const W x0x2 = x0 & x2;
    const W h = x1 ^ x4 ^ (x3 & (x0 ^ x2 ^ x4)) ^ (x0x2 & (x1 ^ x3 ^ x4)) ^ (x2 & x4 & (x1 ^ x3));
    const W z = h ^ b[1] ^ b[2] ^ b[4] ^ b[10] ^ b[31] ^ b[43] ^ b[56];

    W ls = s[62] ^ s[51] ^ s[38] ^ s[23] ^ s[13] ^ s[0];

    const W b63b60 = b[63] & b[60];
    const W b37b33 = b[37] & b[33];
    const W b15b9 = b[15] & b[9];
    const W b52b45 = b[52] & b[45];
    const W b33b28b21 = b[33] & b[28] & b[21];
    W nb = s[0] ^ b[62] ^ b[60] ^ b[52] ^ b[45] ^ b[37] ^ b[33] ^ b[28] ^ b[21] ^ b[14] ^ b[9] ^
           b[0] ^ b63b60 ^ b37b33 ^ b15b9 ^ (b[60] & b52b45) ^ b33b28b21 ^
           (b[63] & b[45] & b[28] & b[9]) ^ (b[60] & b[52] & b37b33) ^
           (b63b60 & b[21] & b[15]) ^ (b63b60 & b52b45 & b[37]) ^ (b33b28b21 & b15b9) ^
           (b52b45 & b37b33 & b[28] & b[21]);
    if constexpr (Initialising) {
      ls = ls ^ z;
      nb = nb ^ z;
    }
    lfsr_.advance(ls);
    nfsr_.advance(nb);
    return z;
  }

  ScalarState lane_state(std::size_t lane) const
  {
    if (lane >= lanes) throw IndexError("lane " + std::to_string(lane) + " out of range");
    ScalarState st;
    for (std::size_t i = 0; i < register_bits; i++) {
      st.lfsr[i / 64] |= std::uint64_t{ lane_bit(lfsr_[i], lane) } << (i % 64);
      st.nfsr[i / 64] |= std::uint64_t{ lane_bit(nfsr_[i], lane) } << (i % 64);
    }
    return st;
  }

private:
  RegisterRing<W> lfsr_;
  RegisterRing<W> nfsr_;
};

// One key/IV per lane (at most `lanes`; unused lanes get a copy of lane 0).
template<SliceWord W>
SlicedState<W>
sliced_init(std::span<const KeyIv> lane_material)
{
  constexpr std::size_t lanes = lanes_v<W>;
  if (lane_material.empty() || lane_material.size() > lanes) {
    throw StructuralError("sliced Grain needs 1.." + std::to_string(lanes) + " key/IV pairs, got " +
                          std::to_string(lane_material.size()));
  }
  for (std::size_t j = 0; j < lane_material.size(); j++) {
    try {
      lane_material[j].validate();
    } catch (const ValidationError& e) {
      throw LaneError(j, e.what());
    }
  }
  RowBlock key_rows, iv_rows;
  key_rows.rows.resize(lanes);
  iv_rows.rows.resize(lanes);
  for (std::size_t j = 0; j < lanes; j++) {
    const auto& m = j < lane_material.size() ? lane_material[j] : lane_material[0];
    key_rows.rows[j] = unpack_bits(m.key, BitOrder::lsb_first);
    iv_rows.rows[j] = unpack_bits(m.iv, BitOrder::lsb_first);
  }
  const auto key_words = transpose_to_sliced<W>(key_rows);
  const auto iv_words = transpose_to_sliced<W>(iv_rows);

  SlicedState<W> st;
  for (std::size_t i = 0; i < register_bits; i++) {
    st.nfsr()[i] = key_words[i];
    st.lfsr()[i] = i < iv_bytes * 8 ? iv_words[i] : ones_word<W>();
  }
  for (std::size_t i = 0; i < init_clocks; i++) st.template clock<true>();
  return st;
}

template<SliceWord W>
void
sliced_generate(SlicedState<W>& st, std::span<W> out) noexcept
{
  for (auto& w : out) w = st.template clock<false>();
}

template<SliceWord W>
SlicedBlock<W>
sliced_keystream(SlicedState<W>& st, std::size_t nbits_per_lane)
{
  SlicedBlock<W> out(nbits_per_lane);
  for (std::size_t t = 0; t < nbits_per_lane; t++) out[t] = st.template clock<false>();
  return out;
}

} // namespace bsprng::grain
