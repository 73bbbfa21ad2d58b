#pragma once

#include <bsprng/bits.hpp>
#include <bsprng/error.hpp>
#include <bsprng/word.hpp>

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

// Column-major ("sliced") data layout.
//
// A SlicedBlock of M registers stores M bit positions of W lanes: register i,
// bit j is bit i of lane j. A RowBlock is the conventional row-major view of
// the same data: W rows of M bits each.
namespace bsprng {

struct RowBlock
{
  std::vector<Bits> rows;

  std::size_t lanes() const noexcept { return rows.size(); }
  std::size_t bit_count() const noexcept { return rows.empty() ? 0 : rows.front().size(); }

  void validate() const
  {
    for (std::size_t j = 0; j < rows.size(); j++) {
      if (rows[j].size() != bit_count()) {
        throw StructuralError("ragged row block: row " + std::to_string(j) + " has " +
                              std::to_string(rows[j].size()) + " bits, row 0 has " +
                              std::to_string(bit_count()));
      }
    }
  }

  friend bool operator==(const RowBlock&, const RowBlock&) = default;
};

enum class ShiftDirection
{
  toward_origin,    // register i receives old register i + count
  away_from_origin, // register i receives old register i - count
};

enum class Fill
{
  cyclic,
  zero,
};

template<SliceWord W>
class SlicedBlock
{
public:
  static constexpr std::size_t lanes = lanes_v<W>;

  SlicedBlock() = default;
  explicit SlicedBlock(std::size_t registers)
    : regs_(registers, zero_word<W>())
  {
  }

  std::size_t size() const noexcept { return regs_.size(); }

  W& operator[](std::size_t i) noexcept { return regs_[physical(i)]; }
  const W& operator[](std::size_t i) const noexcept { return regs_[physical(i)]; }

  W& at(std::size_t i)
  {
    check(i);
    return (*this)[i];
  }
  const W& at(std::size_t i) const
  {
    check(i);
    return (*this)[i];
  }

  // Re-references the registers by moving the origin. No word is shifted or
  // masked; with Fill::zero the `count` registers that wrap around are cleared.
  void rotate(ShiftDirection dir, std::size_t count, Fill fill = Fill::cyclic)
  {
    const std::size_t m = size();
    const bool ok = fill == Fill::zero ? count <= m : count < m || (m == 0 && count == 0);
    if (!ok) {
      throw RangeError("rotate_registers: count " + std::to_string(count) +
                       " out of range for " + std::to_string(m) + " registers");
    }
    if (count == 0) {
      return;
    }
    if (count == m) {
      std::fill(regs_.begin(), regs_.end(), zero_word<W>());
      return;
    }
    if (dir == ShiftDirection::toward_origin) {
      origin_ = (origin_ + count) % m;
      if (fill == Fill::zero) {
        for (std::size_t i = m - count; i < m; i++) (*this)[i] = zero_word<W>();
      }
    } else {
      origin_ = (origin_ + m - count) % m;
      if (fill == Fill::zero) {
        for (std::size_t i = 0; i < count; i++) (*this)[i] = zero_word<W>();
      }
    }
  }

  // Registers in logical order (origin first).
  std::vector<W> registers() const
  {
    std::vector<W> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); i++) out.push_back((*this)[i]);
    return out;
  }

  friend bool operator==(const SlicedBlock& a, const SlicedBlock& b)
  {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); i++) {
      if (to_raw(a[i]) != to_raw(b[i])) return false;
    }
    return true;
  }

private:
  std::size_t physical(std::size_t i) const noexcept
  {
    const std::size_t p = origin_ + i;
    return p >= regs_.size() ? p - regs_.size() : p;
  }

  void check(std::size_t i) const
  {
    if (i >= size()) {
      throw IndexError("register " + std::to_string(i) + " out of range (" +
                       std::to_string(size()) + " registers)");
    }
  }

  std::vector<W> regs_;
  std::size_t origin_ = 0;
};

// In-place transpose of a square bit matrix held as N words of N bits:
// afterwards bit j of word i equals the old bit i of word j. Recursive block
// swap: exchange the off-diagonal halves at width N/2, N/4, ... 1.
template<std::unsigned_integral R, std::size_t N>
constexpr void
transpose_square(std::span<R, N> a) noexcept
{
  static_assert(N == sizeof(R) * 8, "square transpose needs one word per bit");
  R mask = static_cast<R>(~R{ 0 }) >> (N / 2);
  for (std::size_t j = N / 2; j != 0; j >>= 1, mask ^= static_cast<R>(mask << j)) {
    for (std::size_t k = 0; k < N; k = ((k | j) + 1) & ~j) {
      const R t = static_cast<R>(((a[k] >> j) ^ a[k | j]) & mask);
      a[k] ^= static_cast<R>(t << j);
      a[k | j] ^= t;
    }
  }
}

// Always-available bit-by-bit reference path.
template<SliceWord W>
SlicedBlock<W>
transpose_to_sliced_naive(const RowBlock& rows)
{
  rows.validate();
  if (rows.lanes() != lanes_v<W>) {
    throw StructuralError("row block has " + std::to_string(rows.lanes()) +
                          " rows, lane width is " + std::to_string(lanes_v<W>));
  }
  SlicedBlock<W> out(rows.bit_count());
  for (std::size_t i = 0; i < rows.bit_count(); i++) {
    raw_t<W> w = 0;
    for (std::size_t j = 0; j < rows.lanes(); j++) {
      w |= static_cast<raw_t<W>>(raw_t<W>{ rows.rows[j][i] & 1u } << j);
    }
    out[i] = from_raw<W>(w);
  }
  return out;
}

template<SliceWord W>
SlicedBlock<W>
transpose_to_sliced(const RowBlock& rows)
{
  using R = raw_t<W>;
  constexpr std::size_t N = lanes_v<W>;
  rows.validate();
  if (rows.lanes() != N) {
    throw StructuralError("row block has " + std::to_string(rows.lanes()) +
                          " rows, lane width is " + std::to_string(N));
  }
  const std::size_t m = rows.bit_count();
  SlicedBlock<W> out(m);
  // Square fast path, applied per N-bit column chunk (the last chunk is
  // zero padded).
  std::array<R, N> tile{};
  for (std::size_t base = 0; base < m; base += N) {
    const std::size_t width = std::min(N, m - base);
    for (std::size_t j = 0; j < N; j++) {
      R w = 0;
      const auto& row = rows.rows[j];
      for (std::size_t i = 0; i < width; i++) {
        w |= static_cast<R>(R{ row[base + i] & 1u } << i);
      }
      tile[j] = w;
    }
    transpose_square(std::span<R, N>(tile));
    for (std::size_t i = 0; i < width; i++) out[base + i] = from_raw<W>(tile[i]);
  }
  return out;
}

template<SliceWord W>
Bits
extract_lane(const SlicedBlock<W>& slab, std::size_t lane)
{
  if (lane >= lanes_v<W>) {
    throw IndexError("lane " + std::to_string(lane) + " out of range (" +
                     std::to_string(lanes_v<W>) + " lanes)");
  }
  Bits out(slab.size());
  for (std::size_t i = 0; i < slab.size(); i++) out[i] = lane_bit(slab[i], lane);
  return out;
}

template<SliceWord W>
RowBlock
transpose_to_rows(const SlicedBlock<W>& slab)
{
  RowBlock out;
  out.rows.reserve(lanes_v<W>);
  for (std::size_t j = 0; j < lanes_v<W>; j++) out.rows.push_back(extract_lane(slab, j));
  return out;
}

template<SliceWord W>
SlicedBlock<W>
rotate_registers(SlicedBlock<W> slab, ShiftDirection dir, std::size_t count,
                 Fill fill = Fill::cyclic)
{
  slab.rotate(dir, count, fill);
  return slab;
}

// Sliced output words (word t = clock t of every lane) to per-lane byte
// streams. Lane bits are packed in `order`; words.size() must be a multiple
// of 8.
template<SliceWord W>
std::vector<Bytes>
words_to_lane_bytes(std::span<const W> words, BitOrder order)
{
  using R = raw_t<W>;
  constexpr std::size_t N = lanes_v<W>;
  if (words.size() % 8 != 0) {
    throw StructuralError("words_to_lane_bytes: " + std::to_string(words.size()) +
                          " clocks is not a whole number of bytes");
  }
  static constexpr auto reverse = [] {
    std::array<std::uint8_t, 256> t{};
    for (unsigned v = 0; v < 256; v++) {
      unsigned r = 0;
      for (unsigned i = 0; i < 8; i++) r |= ((v >> i) & 1u) << (7 - i);
      t[v] = static_cast<std::uint8_t>(r);
    }
    return t;
  }();
  std::vector<Bytes> lanes(N, Bytes(words.size() / 8));
  std::array<R, N> tile;
  for (std::size_t base = 0; base < words.size(); base += N) {
    const std::size_t width = std::min(N, words.size() - base);
    for (std::size_t i = 0; i < N; i++) tile[i] = i < width ? to_raw(words[base + i]) : R{ 0 };
    transpose_square(std::span<R, N>(tile));
    for (std::size_t j = 0; j < N; j++) {
      for (std::size_t k = 0; k < width / 8; k++) {
        const auto b = static_cast<std::uint8_t>(tile[j] >> (8 * k));
        lanes[j][base / 8 + k] = order == BitOrder::lsb_first ? b : reverse[b];
      }
    }
  }
  return lanes;
}

// Debug dump: one register per line, lowercase hex of the whole word (lane 0
// is the least significant bit), register 0 first.
template<SliceWord W>
std::string
dump_hex(const SlicedBlock<W>& slab)
{
  constexpr int digits = static_cast<int>(lanes_v<W> / 4);
  std::string s;
  char buf[32];
  for (std::size_t i = 0; i < slab.size(); i++) {
    std::snprintf(buf, sizeof buf, "%0*llx\n", digits,
                  static_cast<unsigned long long>(to_raw(slab[i])));
    s += buf;
  }
  return s;
}

// Sliding window of n registers used by the shift-register engines. Shifting
// by one position is an origin increment plus one store; the backing buffer
// is compacted once every `slack` steps.
template<SliceWord W, std::size_t Slack = 256>
class RegisterRing
{
public:
  RegisterRing() = default;
  explicit RegisterRing(std::size_t n)
    : buf_(n + Slack, zero_word<W>())
    , n_(n)
  {
  }

  std::size_t size() const noexcept { return n_; }

  W& operator[](std::size_t i) noexcept { return buf_[head_ + i]; }
  const W& operator[](std::size_t i) const noexcept { return buf_[head_ + i]; }

  // Register i takes register i + 1; `incoming` becomes register n - 1.
  void advance(const W& incoming) noexcept
  {
    if (head_ + n_ == buf_.size()) {
      std::copy(buf_.begin() + static_cast<std::ptrdiff_t>(head_),
                buf_.begin() + static_cast<std::ptrdiff_t>(head_ + n_), buf_.begin());
      head_ = 0;
    }
    buf_[head_ + n_] = incoming;
    ++head_;
  }

private:
  std::vector<W> buf_;
  std::size_t n_ = 0;
  std::size_t head_ = 0;
};

} // namespace bsprng
