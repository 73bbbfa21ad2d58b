#pragma once

#include <bsprng/bits.hpp>
#include <bsprng/bitslab.hpp>
#include <bsprng/error.hpp>
#include <bsprng/word.hpp>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

// Linear feedback shift registers, bit-serial and bitsliced.
//
// Conventions shared by both forms:
//   * state bit 0 is the output end; a step moves every bit one position
//     toward index 0 and emits the bit that leaves index 0;
//   * a FeedbackSpec of degree n with tap set A describes the characteristic
//     polynomial x^n + sum_{i in A} x^i;
//   * Fibonacci: the XOR of the tapped bits enters at index n - 1;
//   * Galois: the output bit re-enters at index n - 1 and is XORed into
//     index i - 1 for every tap i >= 1.
// Both configurations have period ord(P) for the polynomial P above. The
// Galois output obeys the recurrence of the reciprocal of P.
//
// Raw LFSR lanes are linear and therefore NOT cryptographic. Use them for
// simulation or mix them non-linearly before use as random bits.
namespace bsprng {

enum class LfsrConfig
{
  fibonacci,
  galois,
};

class FeedbackSpec
{
public:
  FeedbackSpec(std::size_t degree, std::vector<std::size_t> taps,
               LfsrConfig config = LfsrConfig::fibonacci)
    : degree_(degree)
    , taps_(std::move(taps))
    , config_(config)
  {
    std::sort(taps_.begin(), taps_.end());
    taps_.erase(std::unique(taps_.begin(), taps_.end()), taps_.end());
    if (degree_ == 0) throw ValidationError("LFSR degree must be positive");
    if (taps_.empty()) throw ValidationError("LFSR needs at least one tap");
    if (taps_.back() >= degree_) {
      throw ValidationError("tap " + std::to_string(taps_.back()) + " outside [0, " +
                            std::to_string(degree_) + ")");
    }
    if (taps_.front() != 0 || taps_.back() != degree_ - 1) {
      throw ValidationError("feedback taps must include 0 and n-1 (a_0 = a_{n-1} = 1)");
    }
  }

  std::size_t degree() const noexcept { return degree_; }
  const std::vector<std::size_t>& taps() const noexcept { return taps_; }
  std::size_t tap_count() const noexcept { return taps_.size(); }
  LfsrConfig config() const noexcept { return config_; }

  FeedbackSpec with_config(LfsrConfig c) const { return FeedbackSpec(degree_, taps_, c); }

  // "x^4+x^3+1"
  std::string polynomial() const
  {
    std::string s = "x^" + std::to_string(degree_);
    for (auto it = taps_.rbegin(); it != taps_.rend(); ++it) {
      if (*it == 0) s += "+1";
      else if (*it == 1) s += "+x";
      else s += "+x^" + std::to_string(*it);
    }
    return s;
  }

  // "{0,3};n=4"
  std::string tap_list() const
  {
    std::string s = "{";
    for (std::size_t i = 0; i < taps_.size(); i++) {
      if (i) s += ',';
      s += std::to_string(taps_[i]);
    }
    return s + "};n=" + std::to_string(degree_);
  }

  friend bool operator==(const FeedbackSpec&, const FeedbackSpec&) = default;

private:
  std::size_t degree_;
  std::vector<std::size_t> taps_;
  LfsrConfig config_;
};

namespace detail {

inline std::size_t
parse_index(std::string_view s, std::string_view what)
{
  if (s.empty() || s.size() > 6) throw ValidationError("bad " + std::string(what));
  std::size_t v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw ValidationError("bad " + std::string(what) + " '" + std::string(s) + "'");
    }
    v = v * 10 + static_cast<std::size_t>(c - '0');
  }
  return v;
}

inline std::string
strip_spaces(std::string_view s)
{
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

} // namespace detail

// Accepts the polynomial form "x^4+x^3+1" or the tap-list form "{0,3};n=4".
// Either may carry a trailing ";galois" or ";fibonacci" (default Fibonacci).
inline FeedbackSpec
parse_feedback_spec(std::string_view text)
{
  std::string s = detail::strip_spaces(text);
  LfsrConfig config = LfsrConfig::fibonacci;
  for (auto [suffix, c] : { std::pair{ std::string_view(";galois"), LfsrConfig::galois },
                            std::pair{ std::string_view(";fibonacci"), LfsrConfig::fibonacci } }) {
    if (s.size() > suffix.size() && s.ends_with(suffix)) {
      config = c;
      s.resize(s.size() - suffix.size());
    }
  }
  if (s.empty()) throw ValidationError("empty feedback polynomial");

  if (s.front() == '{') {
    const auto close = s.find('}');
    if (close == std::string::npos || s.compare(close + 1, 3, ";n=") != 0) {
      throw ValidationError("tap list must look like {0,3};n=4");
    }
    std::vector<std::size_t> taps;
    std::string_view body(s.data() + 1, close - 1);
    while (!body.empty()) {
      const auto comma = body.find(',');
      taps.push_back(detail::parse_index(body.substr(0, comma), "tap"));
      if (comma == std::string_view::npos) break;
      body.remove_prefix(comma + 1);
    }
    const auto n = detail::parse_index(std::string_view(s).substr(close + 4), "degree");
    return FeedbackSpec(n, std::move(taps), config);
  }

  std::set<std::size_t> exps;
  std::string_view rest(s);
  while (!rest.empty()) {
    const auto plus = rest.find('+');
    const auto term = rest.substr(0, plus);
    std::size_t e = 0;
    if (term == "1") {
      e = 0;
    } else if (term == "x") {
      e = 1;
    } else if (term.starts_with("x^")) {
      e = detail::parse_index(term.substr(2), "exponent");
    } else {
      throw ValidationError("bad polynomial term '" + std::string(term) + "'");
    }
    if (!exps.insert(e).second) {
      throw ValidationError("repeated polynomial term x^" + std::to_string(e));
    }
    if (plus == std::string_view::npos) break;
    rest.remove_prefix(plus + 1);
  }
  const std::size_t n = *exps.rbegin();
  exps.erase(n);
  return FeedbackSpec(n, std::vector<std::size_t>(exps.begin(), exps.end()), config);
}

// Embedded primitive polynomials, one per supported degree. Each satisfies
// a_0 = a_{n-1} = 1 and is checked by brute-force period in the test suite.
inline FeedbackSpec
primitive_spec(std::size_t degree, LfsrConfig config = LfsrConfig::fibonacci)
{
  switch (degree) {
    case 4: return FeedbackSpec(4, { 0, 3 }, config);             // x^4+x^3+1
    case 8: return FeedbackSpec(8, { 0, 1, 2, 7 }, config);       // x^8+x^7+x^2+x+1
    case 16: return FeedbackSpec(16, { 0, 4, 13, 15 }, config);   // x^16+x^15+x^13+x^4+1
    case 24: return FeedbackSpec(24, { 0, 17, 22, 23 }, config);  // x^24+x^23+x^22+x^17+1
    default:
      throw ValidationError("no embedded primitive polynomial of degree " +
                            std::to_string(degree) + " (have 4, 8, 16, 24)");
  }
}

// Bit-serial LFSR: one byte per state bit, literal shift per step.
class ScalarLfsr
{
public:
  ScalarLfsr(FeedbackSpec spec, Bits state)
    : spec_(std::move(spec))
    , state_(std::move(state))
  {
    if (state_.size() != spec_.degree()) {
      throw StructuralError("LFSR state has " + std::to_string(state_.size()) +
                            " bits, degree is " + std::to_string(spec_.degree()));
    }
    for (auto& b : state_) b &= 1u;
  }

  const FeedbackSpec& spec() const noexcept { return spec_; }
  const Bits& state() const noexcept { return state_; }

  std::uint8_t step()
  {
    const std::size_t n = spec_.degree();
    const std::uint8_t out = state_[0];
    std::uint8_t incoming = out;
    if (spec_.config() == LfsrConfig::fibonacci) {
      incoming = 0;
      for (auto t : spec_.taps()) incoming ^= state_[t];
    }
    for (std::size_t i = 0; i + 1 < n; i++) state_[i] = state_[i + 1];
    state_[n - 1] = incoming;
    if (spec_.config() == LfsrConfig::galois) {
      for (auto t : spec_.taps()) {
        if (t != 0) state_[t - 1] ^= out;
      }
    }
    return out;
  }

  Bits generate(std::size_t nbits)
  {
    Bits out(nbits);
    for (auto& b : out) b = step();
    return out;
  }

private:
  FeedbackSpec spec_;
  Bits state_;
};

// W parallel LFSRs sharing one FeedbackSpec. Register i holds state bit i of
// every lane. A step is an origin move of the register ring plus k - 1
// word-wide XORs; no bit is shifted or masked.
template<SliceWord W>
class SlicedLfsr
{
public:
  static constexpr std::size_t lanes = lanes_v<W>;

  SlicedLfsr(FeedbackSpec spec, const SlicedBlock<W>& state)
    : spec_(std::move(spec))
    , regs_(spec_.degree())
  {
    if (state.size() != spec_.degree()) {
      throw StructuralError("sliced LFSR state has " + std::to_string(state.size()) +
                            " registers, degree is " + std::to_string(spec_.degree()));
    }
    for (std::size_t i = 0; i < state.size(); i++) regs_[i] = state[i];
  }

  // Lane j is seeded with seeds[j]; missing lanes start at zero.
  static SlicedLfsr from_lane_states(FeedbackSpec spec, const std::vector<Bits>& seeds)
  {
    if (seeds.size() > lanes) {
      throw StructuralError(std::to_string(seeds.size()) + " seeds for " +
                            std::to_string(lanes) + " lanes");
    }
    RowBlock rows;
    rows.rows.assign(lanes, Bits(spec.degree(), 0));
    for (std::size_t j = 0; j < seeds.size(); j++) {
      if (seeds[j].size() != spec.degree()) {
        throw LaneError(j, "seed has " + std::to_string(seeds[j].size()) + " bits, expected " +
                              std::to_string(spec.degree()));
      }
      rows.rows[j] = seeds[j];
    }
    return SlicedLfsr(std::move(spec), transpose_to_sliced<W>(rows));
  }

  const FeedbackSpec& spec() const noexcept { return spec_; }

  SlicedBlock<W> state() const
  {
    SlicedBlock<W> s(spec_.degree());
    for (std::size_t i = 0; i < spec_.degree(); i++) s[i] = regs_[i];
    return s;
  }

  W step()
  {
    const auto& taps = spec_.taps();
    const W out = regs_[0];
    if (spec_.config() == LfsrConfig::fibonacci) {
      W fb = regs_[taps[0]];
      for (std::size_t t = 1; t < taps.size(); t++) fb = fb ^ regs_[taps[t]];
      regs_.advance(fb);
    } else {
      regs_.advance(out);
      for (std::size_t t = 1; t < taps.size(); t++) regs_[taps[t] - 1] ^= out;
    }
    return out;
  }

  // Output words for `count` steps: word t carries bit t of every lane.
  SlicedBlock<W> generate(std::size_t count)
  {
    SlicedBlock<W> out(count);
    for (std::size_t t = 0; t < count; t++) out[t] = step();
    return out;
  }

private:
  FeedbackSpec spec_;
  RegisterRing<W> regs_;
};

// Smallest t > 0 with state(t) == state(0), by direct iteration.
inline std::uint64_t
period_bruteforce(const FeedbackSpec& spec, const Bits& seed)
{
  constexpr std::size_t max_degree = 24;
  const std::size_t n = spec.degree();
  if (n > max_degree) {
    throw RangeError("period_bruteforce: degree " + std::to_string(n) + " exceeds " +
                     std::to_string(max_degree));
  }
  if (seed.size() != n) throw StructuralError("seed length differs from degree");
  if (std::none_of(seed.begin(), seed.end(), [](auto b) { return b & 1u; })) {
    throw ValidationError("period_bruteforce: seed must be nonzero");
  }
  // Packed state word; same conventions as ScalarLfsr.
  std::uint32_t taps = 0;
  for (auto t : spec.taps()) taps |= 1u << t;
  std::uint32_t s0 = 0;
  for (std::size_t i = 0; i < n; i++) s0 |= static_cast<std::uint32_t>(seed[i] & 1u) << i;
  const bool fib = spec.config() == LfsrConfig::fibonacci;
  const std::uint32_t galois_mask = taps >> 1;
  std::uint32_t s = s0;
  std::uint64_t t = 0;
  do {
    const std::uint32_t out = s & 1u;
    if (fib) {
      const std::uint32_t fb = static_cast<std::uint32_t>(std::popcount(s & taps) & 1);
      s = (s >> 1) | (fb << (n - 1));
    } else {
      s = (s >> 1) | (out << (n - 1));
      if (out) s ^= galois_mask;
    }
    ++t;
  } while (s != s0);
  return t;
}

// Word-level XORs executed by one sliced step, measured by running the step on
// an instrumented copy of the register state.
template<SliceWord W>
std::uint64_t
xor_op_count_per_step(const SlicedLfsr<W>& l)
{
  using C = CountedWord<raw_t<W>>;
  const auto src = l.state();
  SlicedBlock<C> st(src.size());
  for (std::size_t i = 0; i < src.size(); i++) st[i] = from_raw<C>(to_raw(src[i]));
  SlicedLfsr<C> probe(l.spec(), st);
  const auto before = op_counters;
  probe.step();
  return op_counters.xor_ops - before.xor_ops;
}

} // namespace bsprng
