#pragma once

#include <bsprng/bits.hpp>
#include <bsprng/bitslab.hpp>
#include <bsprng/error.hpp>
#include <bsprng/word.hpp>

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <string>
#include <vector>

// MICKEY 2.0 keystream generator (80-bit key, 0..80-bit IV).
//
// Two 100-bit registers R (linear) and S (non-linear), each clocked
// irregularly under control bits taken from both registers. Key and IV bits
// are consumed MSB-first per byte; keystream bits are packed MSB-first.
//
// Constant tables are those of the eSTREAM MICKEY 2.0 design document, stored
// as in the reference implementation: four 32-bit words per table, bit i of
// the table is bit (i % 32) of word i / 32.
namespace bsprng::mickey {

inline constexpr std::size_t register_bits = 100;
inline constexpr std::size_t key_bits = 80;
inline constexpr std::size_t max_iv_bits = 80;
inline constexpr std::size_t preclock_count = 100;

namespace detail {

inline constexpr std::uint32_t r_mask[4] = { 0x1279327b, 0xb5546660, 0xdf87818f, 0x00000003 };
inline constexpr std::uint32_t comp0[4] = { 0x6aa97a30, 0x7942a809, 0x057ebfea, 0x00000006 };
inline constexpr std::uint32_t comp1[4] = { 0xdd629e9a, 0xe3a21d63, 0x91c23dd7, 0x00000001 };
inline constexpr std::uint32_t s_mask0[4] = { 0x9ffa7faf, 0xaf4a9381, 0x9cec5802, 0x00000001 };
inline constexpr std::uint32_t s_mask1[4] = { 0x4c8cb877, 0x4911b063, 0x40fbc52b, 0x00000008 };

constexpr bool
table_bit(const std::uint32_t (&t)[4], std::size_t i) noexcept
{
  return (t[i / 32] >> (i % 32)) & 1u;
}

// 100-bit value as two words: bits 0..63 and 64..99.
using Packed = std::array<std::uint64_t, 2>;

constexpr Packed
pack(const std::uint32_t (&t)[4]) noexcept
{
  return { std::uint64_t{ t[0] } | (std::uint64_t{ t[1] } << 32),
           std::uint64_t{ t[2] } | (std::uint64_t{ t[3] } << 32) };
}

inline constexpr std::uint64_t hi_mask = (std::uint64_t{ 1 } << 36) - 1;
inline constexpr Packed R_MASK = pack(r_mask);
inline constexpr Packed COMP0 = pack(comp0);
inline constexpr Packed COMP1 = pack(comp1);
inline constexpr Packed FB0 = pack(s_mask0);
inline constexpr Packed FB1 = pack(s_mask1);
// Bits 1..98: positions that take the non-linear S term.
inline constexpr Packed MIDDLE = { ~std::uint64_t{ 1 }, hi_mask >> 1 };

} // namespace detail

struct Constants
{
  std::vector<std::size_t> rtaps; // feedback positions of R
  std::array<std::uint8_t, register_bits> comp0{};
  std::array<std::uint8_t, register_bits> comp1{};
  std::array<std::uint8_t, register_bits> fb0{};
  std::array<std::uint8_t, register_bits> fb1{};
};

inline const Constants&
mickey_constants()
{
  static const Constants c = [] {
    Constants k;
    for (std::size_t i = 0; i < register_bits; i++) {
      if (detail::table_bit(detail::r_mask, i)) k.rtaps.push_back(i);
      k.comp0[i] = detail::table_bit(detail::comp0, i);
      k.comp1[i] = detail::table_bit(detail::comp1, i);
      k.fb0[i] = detail::table_bit(detail::s_mask0, i);
      k.fb1[i] = detail::table_bit(detail::s_mask1, i);
    }
    return k;
  }();
  return c;
}

struct KeyIv
{
  Bytes key;              // 10 bytes
  Bytes iv;               // ceil(iv_bits / 8) bytes
  std::size_t iv_bits = 0;

  static KeyIv make(Bytes key, Bytes iv, std::optional<std::size_t> iv_bits = std::nullopt)
  {
    KeyIv k{ std::move(key), std::move(iv), 0 };
    k.iv_bits = iv_bits.value_or(k.iv.size() * 8);
    k.validate();
    return k;
  }

  void validate() const
  {
    if (key.size() * 8 != key_bits) {
      throw ValidationError("MICKEY key must be 80 bits, got " + std::to_string(key.size() * 8));
    }
    if (iv_bits > max_iv_bits) {
      throw ValidationError("MICKEY IV must be at most 80 bits, got " + std::to_string(iv_bits));
    }
    if (iv.size() * 8 < iv_bits) {
      throw ValidationError("MICKEY IV buffer shorter than the declared IV length");
    }
  }
};

// Row-major state: the conventional implementation with shift and mask
// operations on packed registers, producing one keystream bit per clock.
struct ScalarState
{
  detail::Packed r{};
  detail::Packed s{};

  static bool bit(const detail::Packed& p, std::size_t i) noexcept
  {
    return (p[i >> 6] >> (i & 63)) & 1u;
  }
  bool r_bit(std::size_t i) const noexcept { return bit(r, i); }
  bool s_bit(std::size_t i) const noexcept { return bit(s, i); }

  friend bool operator==(const ScalarState&, const ScalarState&) = default;
};

namespace detail {

inline Packed
shift_up(const Packed& p) noexcept
{
  return { p[0] << 1, ((p[1] << 1) | (p[0] >> 63)) & hi_mask };
}

inline Packed
shift_down(const Packed& p) noexcept
{
  return { (p[0] >> 1) | (p[1] << 63), p[1] >> 1 };
}

inline void
clock_r(Packed& r, bool input_bit, bool control_bit) noexcept
{
  const bool feedback = ScalarState::bit(r, 99) ^ input_bit;
  Packed next = shift_up(r);
  if (feedback) {
    next[0] ^= R_MASK[0];
    next[1] ^= R_MASK[1];
  }
  if (control_bit) {
    next[0] ^= r[0];
    next[1] ^= r[1];
  }
  r = next;
}

inline void
clock_s(Packed& s, bool input_bit, bool control_bit) noexcept
{
  const bool feedback = ScalarState::bit(s, 99) ^ input_bit;
  const Packed up = shift_up(s);
  const Packed down = shift_down(s);
  Packed next;
  for (int w = 0; w < 2; w++) {
    next[w] = up[w] ^ (((s[w] ^ COMP0[w]) & (down[w] ^ COMP1[w])) & MIDDLE[w]);
  }
  if (feedback) {
    const Packed& fb = control_bit ? FB1 : FB0;
    next[0] ^= fb[0];
    next[1] ^= fb[1];
  }
  s = next;
}

} // namespace detail

inline ScalarState
scalar_clock_kg(ScalarState st, bool mixing, bool input_bit) noexcept
{
  const bool control_r = st.s_bit(34) ^ st.r_bit(67);
  const bool control_s = st.s_bit(67) ^ st.r_bit(33);
  const bool input_r = mixing ? input_bit ^ st.s_bit(50) : input_bit;
  detail::clock_r(st.r, input_r, control_r);
  detail::clock_s(st.s, input_bit, control_s);
  return st;
}

inline ScalarState
scalar_init(const KeyIv& kiv)
{
  kiv.validate();
  ScalarState st;
  const Bits iv = unpack_bits(kiv.iv, kiv.iv_bits, BitOrder::msb_first);
  const Bits key = unpack_bits(kiv.key, key_bits, BitOrder::msb_first);
  for (const auto b : iv) st = scalar_clock_kg(st, true, b);
  for (const auto b : key) st = scalar_clock_kg(st, true, b);
  for (std::size_t i = 0; i < preclock_count; i++) st = scalar_clock_kg(st, true, false);
  return st;
}

inline bool
scalar_next_bit(ScalarState& st) noexcept
{
  const bool z = st.r_bit(0) ^ st.s_bit(0);
  st = scalar_clock_kg(st, false, false);
  return z;
}

inline Bits
scalar_keystream(ScalarState& st, std::size_t nbits)
{
  Bits out(nbits);
  for (auto& b : out) b = scalar_next_bit(st);
  return out;
}

// First generated bit is the most significant bit of the first byte.
inline void
scalar_keystream_bytes(ScalarState& st, std::span<std::uint8_t> out) noexcept
{
  for (auto& byte : out) {
    std::uint8_t v = 0;
    for (int j = 0; j < 8; j++) v = static_cast<std::uint8_t>((v << 1) | scalar_next_bit(st));
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

// W parallel MICKEY instances: 100 R words and 100 S words, word i holding
// bit i of every lane. Double-buffered: a clock writes the other bank and
// flips the bank index.
template<SliceWord W>
class SlicedState
{
public:
  static constexpr std::size_t lanes = lanes_v<W>;
  using Regs = std::array<W, register_bits>;

  SlicedState()
  {
    for (auto& bank : r_) bank.fill(zero_word<W>());
    for (auto& bank : s_) bank.fill(zero_word<W>());
  }

  const Regs& r() const noexcept { return r_[bank_]; }
  const Regs& s() const noexcept { return s_[bank_]; }
  Regs& r() noexcept { return r_[bank_]; }
  Regs& s() noexcept { return s_[bank_]; }

  W output() const noexcept { return r()[0] ^ s()[0]; }

  // Mixing is a per-call constant, never lane data.
  template<bool Mixing>
  void clock(const W& input) noexcept
  {
    const Regs& r = r_[bank_];
    const Regs& s = s_[bank_];
    Regs& nr = r_[bank_ ^ 1];
    Regs& ns = s_[bank_ ^ 1];

    const W control_r = s[34] ^ r[67];
    const W control_s = s[67] ^ r[33];
    W input_r = input;
    if constexpr (Mixing) input_r = input ^ s[50];
    const W feedback_r = r[99] ^ input_r;
    const W feedback_s = s[99] ^ input;

    // The S feedback table is chosen per lane by control_s: two masked
    // feedback words replace the branch.
    const W fb_when_1 = feedback_s & control_s;
    const W fb_when_0 = feedback_s ^ fb_when_1;
    const Feedback f{ control_r, feedback_r, fb_when_0, fb_when_1, feedback_s };
    clock_positions(r, s, nr, ns, f, std::make_index_sequence<register_bits>{});
    bank_ ^= 1;
  }

private:
  struct Feedback
  {
    W control_r;
    W feedback_r;
    W s_when_0; // feedback_s in lanes whose control_s is 0
    W s_when_1; // feedback_s in lanes whose control_s is 1
    W s_both;   // feedback_s
  };

  template<std::size_t... I>
  static void clock_positions(const Regs& r, const Regs& s, Regs& nr, Regs& ns, const Feedback& f,
                              std::index_sequence<I...>) noexcept
  {
    (clock_position<I>(r, s, nr, ns, f), ...);
  }

  // Register position I. The constant tables are resolved at compile time:
  // a table bit selects which word-wide terms exist, so each position is a
  // fixed expression over whole words.
  template<std::size_t I>
  static void clock_position(const Regs& r, const Regs& s, Regs& nr, Regs& ns, const Feedback& f) noexcept
  {
    // R: shift, XOR of the old register where control_r is set, Galois
    // injection at the RTAPS positions.
    W x = r[I] & f.control_r;
    if constexpr (I > 0) x = x ^ r[I - 1];
    if constexpr (detail::table_bit(detail::r_mask, I)) x = x ^ f.feedback_r;
    nr[I] = x;

    // S: s_{i-1} + (s_i + COMP0_i)(s_{i+1} + COMP1_i) in the middle, plus
    // the selected feedback table bit.
    constexpr bool f0 = detail::table_bit(detail::s_mask0, I);
    constexpr bool f1 = detail::table_bit(detail::s_mask1, I);
    W fb = zero_word<W>();
    if constexpr (f0 && f1) {
      fb = f.s_both;
    } else if constexpr (f0) {
      fb = f.s_when_0;
    } else if constexpr (f1) {
      fb = f.s_when_1;
    }
    if constexpr (I == 0) {
      ns[I] = fb;
    } else {
      W y = s[I - 1];
      if constexpr (I + 1 < register_bits) {
        W a = s[I];
        W b = s[I + 1];
        if constexpr (detail::table_bit(detail::comp0, I)) a = ~a;
        if constexpr (detail::table_bit(detail::comp1, I)) b = ~b;
        y = y ^ (a & b);
      }
      if constexpr (f0 || f1) y = y ^ fb;
      ns[I] = y;
    }
  }

public:
  // Clock only the lanes selected by `active`; the others keep their state.
  template<bool Mixing>
  void clock_masked(const W& input, const W& active) noexcept
  {
    const Regs old_r = r();
    const Regs old_s = s();
    clock<Mixing>(input);
    for (std::size_t i = 0; i < register_bits; i++) {
      r()[i] = select(active, r()[i], old_r[i]);
      s()[i] = select(active, s()[i], old_s[i]);
    }
  }

  ScalarState lane_state(std::size_t lane) const
  {
    if (lane >= lanes) throw IndexError("lane " + std::to_string(lane) + " out of range");
    ScalarState st;
    for (std::size_t i = 0; i < register_bits; i++) {
      st.r[i >> 6] |= std::uint64_t{ lane_bit(r()[i], lane) } << (i & 63);
      st.s[i >> 6] |= std::uint64_t{ lane_bit(s()[i], lane) } << (i & 63);
    }
    return st;
  }

private:
  std::array<Regs, 2> r_;
  std::array<Regs, 2> s_;
  unsigned bank_ = 0;
};

// One key/IV per lane (at most `lanes`; unused lanes get a copy of lane 0).
// IVs of different lengths are aligned at their end: a lane with a shorter
// IV stays frozen, through a per-lane select mask, until its first IV bit.
template<SliceWord W>
SlicedState<W>
sliced_init(std::span<const KeyIv> lane_material)
{
  constexpr std::size_t lanes = lanes_v<W>;
  using R = raw_t<W>;
  if (lane_material.empty() || lane_material.size() > lanes) {
    throw StructuralError("sliced MICKEY needs 1.." + std::to_string(lanes) + " key/IV pairs, got " +
                          std::to_string(lane_material.size()));
  }
  for (std::size_t j = 0; j < lane_material.size(); j++) {
    try {
      lane_material[j].validate();
    } catch (const ValidationError& e) {
      throw LaneError(j, e.what());
    }
  }
  auto material = [&](std::size_t j) -> const KeyIv& {
    return j < lane_material.size() ? lane_material[j] : lane_material[0];
  };

  std::size_t longest = 0;
  for (std::size_t j = 0; j < lanes; j++) longest = std::max(longest, material(j).iv_bits);

  RowBlock iv_rows;
  RowBlock key_rows;
  iv_rows.rows.resize(lanes);
  key_rows.rows.resize(lanes);
  for (std::size_t j = 0; j < lanes; j++) {
    const auto& m = material(j);
    const std::size_t lead = longest - m.iv_bits;
    Bits iv(longest, 0);
    const Bits own = unpack_bits(m.iv, m.iv_bits, BitOrder::msb_first);
    std::copy(own.begin(), own.end(), iv.begin() + static_cast<std::ptrdiff_t>(lead));
    iv_rows.rows[j] = std::move(iv);
    key_rows.rows[j] = unpack_bits(m.key, key_bits, BitOrder::msb_first);
  }
  const auto iv_words = transpose_to_sliced<W>(iv_rows);
  const auto key_words = transpose_to_sliced<W>(key_rows);

  SlicedState<W> st;
  for (std::size_t t = 0; t < longest; t++) {
    R active = 0;
    for (std::size_t j = 0; j < lanes; j++) {
      if (t >= longest - material(j).iv_bits) active |= static_cast<R>(R{ 1 } << j);
    }
    if (active == static_cast<R>(~R{ 0 })) {
      st.template clock<true>(iv_words[t]);
    } else {
      st.template clock_masked<true>(iv_words[t], from_raw<W>(active));
    }
  }
  for (std::size_t t = 0; t < key_bits; t++) st.template clock<true>(key_words[t]);
  for (std::size_t t = 0; t < preclock_count; t++) st.template clock<true>(zero_word<W>());
  return st;
}

// Fills `out` with one keystream word per clock (word t = bit t of every lane).
template<SliceWord W>
void
sliced_generate(SlicedState<W>& st, std::span<W> out) noexcept
{
  const W zero = zero_word<W>();
  for (auto& w : out) {
    w = st.output();
    st.template clock<false>(zero);
  }
}

template<SliceWord W>
SlicedBlock<W>
sliced_keystream(SlicedState<W>& st, std::size_t nbits_per_lane)
{
  SlicedBlock<W> out(nbits_per_lane);
  const W zero = zero_word<W>();
  for (std::size_t t = 0; t < nbits_per_lane; t++) {
    out[t] = st.output();
    st.template clock<false>(zero);
  }
  return out;
}

} // namespace bsprng::mickey
