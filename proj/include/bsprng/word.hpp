#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>

// Word-level abstraction used by every bitsliced engine.
//
// A slice word holds one bit position of `lanes` independent instances:
// lane j lives in bit j (LSB-first). Engines are templates over the word type
// and only ever touch words through ~, &, |, ^ so that the same code runs on
// plain integers and on the instrumented CountedWord below.
namespace bsprng {

template<typename W>
struct word_traits;

template<>
struct word_traits<std::uint32_t>
{
  using raw_type = std::uint32_t;
  static constexpr std::size_t lanes = 32;
};

template<>
struct word_traits<std::uint64_t>
{
  using raw_type = std::uint64_t;
  static constexpr std::size_t lanes = 64;
};

// Per-thread tallies of word-wide logic operations executed on CountedWord.
struct OpCounters
{
  std::uint64_t xor_ops = 0;
  std::uint64_t and_ops = 0;
  std::uint64_t or_ops = 0;
  std::uint64_t not_ops = 0;

  std::uint64_t total() const noexcept { return xor_ops + and_ops + or_ops + not_ops; }
};

inline thread_local OpCounters op_counters{};

// Instrumented word. Every logic operator bumps `op_counters`. There is no
// conversion to bool and no comparison operator, so an engine instantiated on
// CountedWord cannot branch on lane data: it does not compile if it tries.
template<std::unsigned_integral U>
struct CountedWord
{
  U raw{};

  friend CountedWord operator^(CountedWord a, CountedWord b) noexcept
  {
    ++op_counters.xor_ops;
    return { static_cast<U>(a.raw ^ b.raw) };
  }
  friend CountedWord operator&(CountedWord a, CountedWord b) noexcept
  {
    ++op_counters.and_ops;
    return { static_cast<U>(a.raw & b.raw) };
  }
  friend CountedWord operator|(CountedWord a, CountedWord b) noexcept
  {
    ++op_counters.or_ops;
    return { static_cast<U>(a.raw | b.raw) };
  }
  friend CountedWord operator~(CountedWord a) noexcept
  {
    ++op_counters.not_ops;
    return { static_cast<U>(~a.raw) };
  }
  CountedWord& operator^=(CountedWord b) noexcept { return *this = *this ^ b; }
  CountedWord& operator&=(CountedWord b) noexcept { return *this = *this & b; }
  CountedWord& operator|=(CountedWord b) noexcept { return *this = *this | b; }
};

template<std::unsigned_integral U>
struct word_traits<CountedWord<U>>
{
  using raw_type = U;
  static constexpr std::size_t lanes = word_traits<U>::lanes;
};

template<typename W>
concept SliceWord = requires {
  typename word_traits<W>::raw_type;
  { word_traits<W>::lanes } -> std::convertible_to<std::size_t>;
};

template<SliceWord W>
inline constexpr std::size_t lanes_v = word_traits<W>::lanes;

template<SliceWord W>
using raw_t = typename word_traits<W>::raw_type;

// Conversions between engine words and raw integers. These are layout moves
// (loading/storing), not logic, and are never counted.
template<SliceWord W>
constexpr W
from_raw(raw_t<W> v) noexcept
{
  if constexpr (std::same_as<W, raw_t<W>>) {
    return v;
  } else {
    return W{ v };
  }
}

template<SliceWord W>
constexpr raw_t<W>
to_raw(const W& w) noexcept
{
  if constexpr (std::same_as<W, raw_t<W>>) {
    return w;
  } else {
    return w.raw;
  }
}

template<SliceWord W>
constexpr W
zero_word() noexcept
{
  return from_raw<W>(raw_t<W>{ 0 });
}

template<SliceWord W>
constexpr W
ones_word() noexcept
{
  return from_raw<W>(static_cast<raw_t<W>>(~raw_t<W>{ 0 }));
}

// Broadcast a single lane-independent bit to every lane.
template<SliceWord W>
constexpr W
broadcast(bool bit) noexcept
{
  return bit ? ones_word<W>() : zero_word<W>();
}

template<SliceWord W>
constexpr bool
lane_bit(const W& w, std::size_t lane) noexcept
{
  return (to_raw(w) >> lane) & 1u;
}

template<SliceWord W>
constexpr void
set_lane_bit(W& w, std::size_t lane, bool bit) noexcept
{
  using R = raw_t<W>;
  const R mask = static_cast<R>(R{ 1 } << lane);
  R v = to_raw(w);
  v = bit ? static_cast<R>(v | mask) : static_cast<R>(v & ~mask);
  w = from_raw<W>(v);
}

// Branch-free per-lane multiplexer: lanes with `sel` set take `a`, others `b`.
template<SliceWord W>
constexpr W
select(const W& sel, const W& a, const W& b) noexcept
{
  return b ^ ((a ^ b) & sel);
}

} // namespace bsprng
