#pragma once

#include <bsprng/aes.hpp>
#include <bsprng/bitslab.hpp>
#include <bsprng/error.hpp>
#include <bsprng/word.hpp>

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

// Bitsliced AES-128 and CTR keystream.
//
// Sliced state layout: register 8 * k + b holds bit b (LSB = 0) of state
// byte k for every lane, byte k being FIPS-197 row k % 4, column k / 4:
//
//   byte:      0    1    2    3    4   ...  15
//   registers: 0-7  8-15 16-23 24-31 32-39 ... 120-127
//   state:     r0c0 r1c0 r2c0 r3c0 r0c1 ...  r3c3
namespace bsprng::aes {

inline constexpr std::size_t nonce_bytes = 12;
using Nonce = std::array<std::uint8_t, nonce_bytes>;

inline Nonce
make_nonce(std::span<const std::uint8_t> bytes)
{
  if (bytes.size() != nonce_bytes) {
    throw ValidationError("CTR nonce must be 12 bytes, got " + std::to_string(bytes.size()));
  }
  Nonce n{};
  std::copy(bytes.begin(), bytes.end(), n.begin());
  return n;
}

template<SliceWord W>
using SlicedState = std::array<W, 128>;

template<SliceWord W>
using SlicedByte = std::array<W, 8>;

// S-box as a 113-gate network (Boyar and Peralta, "A depth-16 circuit for
// the AES S-box", 2011; operand naming as in BearSSL's aes_ct). Input and
// output registers are bit 0 (LSB) .. bit 7.
template<SliceWord W>
constexpr void
sbox_sliced(SlicedByte<W>& q) noexcept
{
  const W x0 = q[7], x1 = q[6], x2 = q[5], x3 = q[4], x4 = q[3], x5 = q[2], x6 = q[1], x7 = q[0];

  // top linear layer
  const W y14 = x3 ^ x5;
  const W y13 = x0 ^ x6;
  const W y9 = x0 ^ x3;
  const W y8 = x0 ^ x5;
  const W t0 = x1 ^ x2;
  const W y1 = t0 ^ x7;
  const W y4 = y1 ^ x3;
  const W y12 = y13 ^ y14;
  const W y2 = y1 ^ x0;
  const W y5 = y1 ^ x6;
  const W y3 = y5 ^ y8;
  const W t1 = x4 ^ y12;
  const W y15 = t1 ^ x5;
  const W y20 = t1 ^ x1;
  const W y6 = y15 ^ x7;
  const W y10 = y15 ^ t0;
  const W y11 = y20 ^ y9;
  const W y7 = x7 ^ y11;
  const W y17 = y10 ^ y11;
  const W y19 = y10 ^ y8;
  const W y16 = t0 ^ y11;
  const W y21 = y13 ^ y16;
  const W y18 = x0 ^ y16;

  // non-linear middle (GF(2^4) inversion)
  const W t2 = y12 & y15;
  const W t3 = y3 & y6;
  const W t4 = t3 ^ t2;
  const W t5 = y4 & x7;
  const W t6 = t5 ^ t2;
  const W t7 = y13 & y16;
  const W t8 = y5 & y1;
  const W t9 = t8 ^ t7;
  const W t10 = y2 & y7;
  const W t11 = t10 ^ t7;
  const W t12 = y9 & y11;
  const W t13 = y14 & y17;
  const W t14 = t13 ^ t12;
  const W t15 = y8 & y10;
  const W t16 = t15 ^ t12;
  const W t17 = t4 ^ t14;
  const W t18 = t6 ^ t16;
  const W t19 = t9 ^ t14;
  const W t20 = t11 ^ t16;
  const W t21 = t17 ^ y20;
  const W t22 = t18 ^ y19;
  const W t23 = t19 ^ y21;
  const W t24 = t20 ^ y18;

  const W t25 = t21 ^ t22;
  const W t26 = t21 & t23;
  const W t27 = t24 ^ t26;
  const W t28 = t25 & t27;
  const W t29 = t28 ^ t22;
  const W t30 = t23 ^ t24;
  const W t31 = t22 ^ t26;
  const W t32 = t31 & t30;
  const W t33 = t32 ^ t24;
  const W t34 = t23 ^ t33;
  const W t35 = t27 ^ t33;
  const W t36 = t24 & t35;
  const W t37 = t36 ^ t34;
  const W t38 = t27 ^ t36;
  const W t39 = t29 & t38;
  const W t40 = t25 ^ t39;

  const W t41 = t40 ^ t37;
  const W t42 = t29 ^ t33;
  const W t43 = t29 ^ t40;
  const W t44 = t33 ^ t37;
  const W t45 = t42 ^ t41;
  const W z0 = t44 & y15;
  const W z1 = t37 & y6;
  const W z2 = t33 & x7;
  const W z3 = t43 & y16;
  const W z4 = t40 & y1;
  const W z5 = t29 & y7;
  const W z6 = t42 & y11;
  const W z7 = t45 & y17;
  const W z8 = t41 & y10;
  const W z9 = t44 & y12;
  const W z10 = t37 & y3;
  const W z11 = t33 & y4;
  const W z12 = t43 & y13;
  const W z13 = t40 & y5;
  const W z14 = t29 & y2;
  const W z15 = t42 & y9;
  const W z16 = t45 & y14;
  const W z17 = t41 & y8;

  // bottom linear layer
  const W t46 = z15 ^ z16;
  const W t47 = z10 ^ z11;
  const W t48 = z5 ^ z13;
  const W t49 = z9 ^ z10;
  const W t50 = z2 ^ z12;
  const W t51 = z2 ^ z5;
  const W t52 = z7 ^ z8;
  const W t53 = z0 ^ z3;
  const W t54 = z6 ^ z7;
  const W t55 = z16 ^ z17;
  const W t56 = z12 ^ t48;
  const W t57 = t50 ^ t53;
  const W t58 = z4 ^ t46;
  const W t59 = z3 ^ t54;
  const W t60 = t46 ^ t57;
  const W t61 = z14 ^ t57;
  const W t62 = t52 ^ t58;
  const W t63 = t49 ^ t58;
  const W t64 = z4 ^ t59;
  const W t65 = t61 ^ t62;
  const W t66 = z1 ^ t63;
  const W s0 = t59 ^ t63;
  const W s6 = t56 ^ ~t62;
  const W s7 = t48 ^ ~t60;
  const W t67 = t64 ^ t65;
  const W s3 = t53 ^ t66;
  const W s4 = t51 ^ t66;
  const W s5 = t47 ^ t65;
  const W s1 = t64 ^ ~s3;
  const W s2 = t55 ^ ~t67;

  q[7] = s0;
  q[6] = s1;
  q[5] = s2;
  q[4] = s3;
  q[3] = s4;
  q[2] = s5;
  q[1] = s6;
  q[0] = s7;
}

template<SliceWord W>
constexpr void
sub_bytes_sliced(SlicedState<W>& st) noexcept
{
  for (std::size_t k = 0; k < 16; k++) {
    SlicedByte<W> q;
    for (std::size_t b = 0; b < 8; b++) q[b] = st[8 * k + b];
    sbox_sliced(q);
    for (std::size_t b = 0; b < 8; b++) st[8 * k + b] = q[b];
  }
}

// Register permutation only: new (r, c) = old (r, c + r).
template<SliceWord W>
constexpr SlicedState<W>
shift_rows_sliced(const SlicedState<W>& st) noexcept
{
  SlicedState<W> out;
  for (std::size_t c = 0; c < 4; c++) {
    for (std::size_t r = 0; r < 4; r++) {
      const std::size_t from = 4 * ((c + r) % 4) + r;
      for (std::size_t b = 0; b < 8; b++) out[8 * (4 * c + r) + b] = st[8 * from + b];
    }
  }
  return out;
}

// Multiplication by {02} in GF(2^8), i.e. x^8 = x^4 + x^3 + x + 1.
template<SliceWord W>
constexpr SlicedByte<W>
xtime_sliced(const SlicedByte<W>& a) noexcept
{
  return { a[7], a[0] ^ a[7], a[1], a[2] ^ a[7], a[3] ^ a[7], a[4], a[5], a[6] };
}

// Per column: out_r = a_r + t + {02}(a_r + a_{r+1}), with t = a0 + a1 + a2 + a3.
template<SliceWord W>
constexpr void
mix_columns_sliced(SlicedState<W>& st) noexcept
{
  for (std::size_t c = 0; c < 4; c++) {
    W* col = &st[32 * c];
    std::array<W, 8> t;
    for (std::size_t b = 0; b < 8; b++) t[b] = col[b] ^ col[8 + b] ^ col[16 + b] ^ col[24 + b];
    std::array<SlicedByte<W>, 4> pair;
    for (std::size_t r = 0; r < 4; r++) {
      SlicedByte<W> s;
      for (std::size_t b = 0; b < 8; b++) s[b] = col[8 * r + b] ^ col[8 * ((r + 1) % 4) + b];
      pair[r] = xtime_sliced(s);
    }
    for (std::size_t r = 0; r < 4; r++) {
      for (std::size_t b = 0; b < 8; b++) col[8 * r + b] = col[8 * r + b] ^ t[b] ^ pair[r][b];
    }
  }
}

// Round keys with every bit broadcast to a full word.
template<SliceWord W>
struct SlicedKeySchedule
{
  std::array<SlicedState<W>, rounds + 1> round_keys;

  explicit SlicedKeySchedule(const KeySchedule& ks)
  {
    for (std::size_t r = 0; r <= rounds; r++) {
      for (std::size_t k = 0; k < 16; k++) {
        for (std::size_t b = 0; b < 8; b++) {
          round_keys[r][8 * k + b] = broadcast<W>((ks[r][k] >> b) & 1u);
        }
      }
    }
  }

  const SlicedState<W>& operator[](std::size_t r) const noexcept { return round_keys[r]; }
};

template<SliceWord W>
constexpr void
add_round_key_sliced(SlicedState<W>& st, const SlicedState<W>& rk) noexcept
{
  for (std::size_t i = 0; i < 128; i++) st[i] ^= rk[i];
}

template<SliceWord W>
constexpr void
round_sliced(SlicedState<W>& st, const SlicedState<W>& rk, bool final = false) noexcept
{
  sub_bytes_sliced(st);
  st = shift_rows_sliced(st);
  if (!final) mix_columns_sliced(st);
  add_round_key_sliced(st, rk);
}

template<SliceWord W>
constexpr void
encrypt_sliced(const SlicedKeySchedule<W>& ks, SlicedState<W>& st) noexcept
{
  add_round_key_sliced(st, ks[0]);
  for (std::size_t r = 1; r < rounds; r++) round_sliced(st, ks[r]);
  round_sliced(st, ks[rounds], true);
}

// Up to `lanes` blocks -> sliced state (missing lanes are zero).
template<SliceWord W>
SlicedState<W>
blocks_to_sliced(std::span<const Block> blocks)
{
  using R = raw_t<W>;
  constexpr std::size_t N = lanes_v<W>;
  constexpr std::size_t chunk_bytes = N / 8;
  if (blocks.size() > N) {
    throw StructuralError(std::to_string(blocks.size()) + " blocks for " + std::to_string(N) +
                          " lanes");
  }
  SlicedState<W> st;
  std::array<R, N> tile;
  for (std::size_t base = 0; base < block_bytes; base += chunk_bytes) {
    tile.fill(0);
    for (std::size_t j = 0; j < blocks.size(); j++) {
      R v = 0;
      for (std::size_t k = 0; k < chunk_bytes; k++) v |= static_cast<R>(R{ blocks[j][base + k] } << (8 * k));
      tile[j] = v;
    }
    transpose_square(std::span<R, N>(tile));
    for (std::size_t i = 0; i < N; i++) st[8 * base + i] = from_raw<W>(tile[i]);
  }
  return st;
}

template<SliceWord W>
void
sliced_to_blocks(const SlicedState<W>& st, std::span<Block> out)
{
  using R = raw_t<W>;
  constexpr std::size_t N = lanes_v<W>;
  constexpr std::size_t chunk_bytes = N / 8;
  if (out.size() > N) {
    throw StructuralError(std::to_string(out.size()) + " blocks for " + std::to_string(N) + " lanes");
  }
  std::array<R, N> tile;
  for (std::size_t base = 0; base < block_bytes; base += chunk_bytes) {
    for (std::size_t i = 0; i < N; i++) tile[i] = to_raw(st[8 * base + i]);
    transpose_square(std::span<R, N>(tile));
    for (std::size_t j = 0; j < out.size(); j++) {
      for (std::size_t k = 0; k < chunk_bytes; k++) {
        out[j][base + k] = static_cast<std::uint8_t>(tile[j] >> (8 * k));
      }
    }
  }
}

// Lane j of the result is AES-128 of blocks[j]; accepts at most `lanes` blocks.
template<SliceWord W>
std::vector<Block>
encrypt_blocks_sliced(const KeySchedule& ks, std::span<const Block> blocks)
{
  SlicedState<W> st = blocks_to_sliced<W>(blocks);
  encrypt_sliced(SlicedKeySchedule<W>(ks), st);
  std::vector<Block> out(blocks.size());
  sliced_to_blocks<W>(st, out);
  return out;
}

inline constexpr std::uint64_t counter_space = std::uint64_t{ 1 } << 32;

namespace detail {

inline void
check_counter_range(std::uint64_t first_block, std::uint64_t nblocks)
{
  if (first_block > counter_space || nblocks > counter_space - first_block) {
    throw CounterExhausted("CTR request covers blocks [" + std::to_string(first_block) + ", " +
                           std::to_string(first_block + nblocks) +
                           "), beyond the 2^32-block counter space");
  }
}

} // namespace detail

// Scalar reference: AES(key, nonce || ctr) for ctr = first_block, ... truncated
// to nbytes.
inline Bytes
ctr_keystream_scalar(const Key& key, const Nonce& nonce, std::size_t nbytes,
                     std::uint64_t first_block = 0)
{
  const std::uint64_t nblocks = (nbytes + block_bytes - 1) / block_bytes;
  detail::check_counter_range(first_block, nblocks);
  const KeySchedule ks = key_expand(key);
  Bytes out(nbytes);
  for (std::uint64_t b = 0; b < nblocks; b++) {
    const Block c = encrypt_block(ks, counter_block(nonce, static_cast<std::uint32_t>(first_block + b)));
    const std::size_t off = static_cast<std::size_t>(b) * block_bytes;
    std::copy_n(c.begin(), std::min(block_bytes, nbytes - off), out.begin() + static_cast<std::ptrdiff_t>(off));
  }
  return out;
}

// Sliced CTR generator: each batch encrypts `lanes` consecutive counters.
template<SliceWord W>
class CtrGenerator
{
public:
  static constexpr std::size_t lanes = lanes_v<W>;

  CtrGenerator(const Key& key, const Nonce& nonce, std::uint64_t first_block = 0)
    : ks_(key_expand(key))
    , nonce_(nonce)
    , next_(first_block)
  {
    detail::check_counter_range(first_block, 0);
  }

  std::uint64_t next_block() const noexcept { return next_; }

  // Encrypts counters next_block() .. next_block() + count - 1 (count <= lanes)
  // into `st` without leaving the sliced domain.
  void next_batch(SlicedState<W>& st, std::size_t count = lanes)
  {
    detail::check_counter_range(next_, count);
    std::array<Block, lanes> ctr;
    for (std::size_t j = 0; j < count; j++) {
      ctr[j] = counter_block(nonce_, static_cast<std::uint32_t>(next_ + j));
    }
    st = blocks_to_sliced<W>(std::span<const Block>(ctr.data(), count));
    encrypt_sliced(ks_, st);
    next_ += count;
  }

  void generate(std::span<std::uint8_t> out)
  {
    const std::size_t nblocks = (out.size() + block_bytes - 1) / block_bytes;
    detail::check_counter_range(next_, nblocks);
    SlicedState<W> st;
    std::array<Block, lanes> blocks;
    std::size_t done = 0;
    while (done < out.size()) {
      const std::size_t remaining = (out.size() - done + block_bytes - 1) / block_bytes;
      const std::size_t count = std::min(lanes, remaining);
      next_batch(st, count);
      sliced_to_blocks<W>(st, std::span<Block>(blocks.data(), count));
      for (std::size_t j = 0; j < count && done < out.size(); j++) {
        const std::size_t n = std::min(block_bytes, out.size() - done);
        std::memcpy(out.data() + done, blocks[j].data(), n);
        done += n;
      }
    }
  }

private:
  SlicedKeySchedule<W> ks_;
  Nonce nonce_;
  std::uint64_t next_;
};

// Random access: the stream from block t onward depends only on (key, nonce, t).
template<SliceWord W>
Bytes
ctr_keystream(const Key& key, const Nonce& nonce, std::size_t nbytes, std::uint64_t first_block = 0)
{
  detail::check_counter_range(first_block, (nbytes + block_bytes - 1) / block_bytes);
  CtrGenerator<W> gen(key, nonce, first_block);
  Bytes out(nbytes);
  gen.generate(out);
  return out;
}

} // namespace bsprng::aes
