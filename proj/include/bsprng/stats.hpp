#pragma once

#include <bsprng/bits.hpp>
#include <bsprng/error.hpp>
#include <bsprng/special.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

// NIST SP 800-22 subset: frequency, block frequency, runs, longest run of
// ones, binary matrix rank, serial, approximate entropy, cumulative sums and
// linear complexity, plus the two-level suite evaluation (pass proportion and
// p-value uniformity across streams).
//
// Streams are sequences of 0/1 values, one per element.
namespace bsprng::stats {

inline constexpr double default_alpha = 0.01;

using BitSpan = std::span<const std::uint8_t>;

struct PValue
{
  std::string label; // empty for single-valued tests
  double p = 0.0;
};

struct TestReport
{
  std::string name;
  std::vector<PValue> p_values;
  double alpha = default_alpha;
  std::string note;

  // Smallest p-value (the deciding one).
  double p_value() const noexcept
  {
    double m = 1.0;
    for (const auto& v : p_values) m = std::min(m, v.p);
    return m;
  }

  bool passed() const noexcept
  {
    return std::all_of(p_values.begin(), p_values.end(),
                       [&](const PValue& v) { return v.p >= alpha; });
  }
};

// Packed-or-unpacked input helper: one element per bit.
class BitStream
{
public:
  BitStream() = default;
  explicit BitStream(Bits bits)
    : bits_(std::move(bits))
  {
    if (bits_.empty()) throw ValidationError("bit stream must not be empty");
    for (auto& b : bits_) {
      if (b > 1) throw ValidationError("bit stream elements must be 0 or 1");
    }
  }

  static BitStream from_bytes(std::span<const std::uint8_t> bytes, BitOrder order = BitOrder::msb_first)
  {
    return BitStream(unpack_bits(bytes, order));
  }

  static BitStream from_string(std::string_view s)
  {
    Bits b;
    b.reserve(s.size());
    for (char c : s) {
      if (c == '0' || c == '1') {
        b.push_back(static_cast<std::uint8_t>(c - '0'));
      } else if (c != ' ' && c != '\n' && c != '\r' && c != '\t') {
        throw ValidationError(std::string("unexpected character '") + c + "' in bit string");
      }
    }
    return BitStream(std::move(b));
  }

  std::size_t size() const noexcept { return bits_.size(); }
  BitSpan bits() const noexcept { return bits_; }
  operator BitSpan() const noexcept { return bits_; }

private:
  Bits bits_;
};

namespace detail {

inline void
require(const char* test, std::size_t minimum, std::size_t got)
{
  if (got < minimum) throw InsufficientData(test, minimum, got);
}

inline TestReport
single(std::string name, double p, double alpha, std::string note = {})
{
  return TestReport{ std::move(name), { PValue{ {}, std::clamp(p, 0.0, 1.0) } }, alpha, std::move(note) };
}

inline double
chi_squared(std::span<const std::uint64_t> observed, std::span<const double> pi, double total)
{
  double chi = 0.0;
  for (std::size_t i = 0; i < observed.size(); i++) {
    const double e = total * pi[i];
    const double d = static_cast<double>(observed[i]) - e;
    chi += d * d / e;
  }
  return chi;
}

// Counts of the n overlapping m-bit patterns of the cyclically extended
// stream; pattern value is read MSB-first.
inline std::vector<std::uint64_t>
pattern_counts(BitSpan e, unsigned m)
{
  const std::size_t n = e.size();
  std::vector<std::uint64_t> counts(std::size_t{ 1 } << m, 0);
  const std::uint32_t mask = static_cast<std::uint32_t>((std::uint64_t{ 1 } << m) - 1);
  std::uint32_t idx = 0;
  for (unsigned i = 0; i + 1 < m; i++) idx = (idx << 1) | e[i % n];
  for (std::size_t i = 0; i < n; i++) {
    idx = ((idx << 1) | e[(i + m - 1) % n]) & mask;
    ++counts[idx];
  }
  return counts;
}

// Counts for m - 1 from counts for m (drop the last bit of each pattern).
inline std::vector<std::uint64_t>
fold_counts(const std::vector<std::uint64_t>& c)
{
  std::vector<std::uint64_t> out(c.size() / 2);
  for (std::size_t y = 0; y < out.size(); y++) out[y] = c[2 * y] + c[2 * y + 1];
  return out;
}

} // namespace detail

inline TestReport
frequency_test(BitSpan e, double alpha = default_alpha)
{
  detail::require("Frequency", 1, e.size());
  const double n = static_cast<double>(e.size());
  std::int64_t s = 0;
  for (auto b : e) s += b ? 1 : -1;
  const double s_obs = std::fabs(static_cast<double>(s)) / std::sqrt(n);
  return detail::single("Frequency", special::erfc(s_obs / std::sqrt(2.0)), alpha);
}

inline TestReport
block_frequency_test(BitSpan e, std::size_t block_len = 128, double alpha = default_alpha)
{
  if (block_len == 0) throw RangeError("BlockFrequency: block length must be positive");
  detail::require("BlockFrequency", block_len, e.size());
  const std::size_t blocks = e.size() / block_len;
  double sum = 0.0;
  for (std::size_t i = 0; i < blocks; i++) {
    std::size_t ones = 0;
    for (std::size_t j = 0; j < block_len; j++) ones += e[i * block_len + j];
    const double d = static_cast<double>(ones) / static_cast<double>(block_len) - 0.5;
    sum += d * d;
  }
  const double chi = 4.0 * static_cast<double>(block_len) * sum;
  return detail::single("BlockFrequency", special::igamc(static_cast<double>(blocks) / 2.0, chi / 2.0), alpha);
}

// When the ones proportion is too far from 1/2 the frequency prerequisite
// fails and the test reports p = 0 without computing the run statistic.
inline TestReport
runs_test(BitSpan e, double alpha = default_alpha)
{
  detail::require("Runs", 2, e.size());
  const double n = static_cast<double>(e.size());
  std::size_t ones = 0;
  for (auto b : e) ones += b;
  const double pi = static_cast<double>(ones) / n;
  if (std::fabs(pi - 0.5) >= 2.0 / std::sqrt(n)) {
    return detail::single("Runs", 0.0, alpha, "frequency prerequisite failed");
  }
  std::size_t v = 1;
  for (std::size_t k = 0; k + 1 < e.size(); k++) v += e[k] != e[k + 1];
  const double prod = pi * (1.0 - pi);
  const double arg = std::fabs(static_cast<double>(v) - 2.0 * n * prod) / (2.0 * std::sqrt(2.0 * n) * prod);
  return detail::single("Runs", special::erfc(arg), alpha);
}

namespace detail {

struct LongestRunTable
{
  std::size_t block_len;
  std::size_t low;  // first class: run length <= low
  std::size_t high; // last class: run length >= high
  std::vector<double> pi;
};

inline const LongestRunTable&
longest_run_table(std::size_t n)
{
  static const LongestRunTable t8{ 8, 1, 4, { 0.21484375, 0.3671875, 0.23046875, 0.1875 } };
  static const LongestRunTable t128{
    128, 4, 9, { 0.1174035788, 0.242955959, 0.249363483, 0.17517706, 0.102701071, 0.112398847 }
  };
  static const LongestRunTable t10k{
    10000, 10, 16, { 0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727 }
  };
  if (n < 6272) return t8;
  if (n < 750000) return t128;
  return t10k;
}

} // namespace detail

inline TestReport
longest_run_test(BitSpan e, double alpha = default_alpha)
{
  detail::require("LongestRun", 128, e.size());
  const auto& t = detail::longest_run_table(e.size());
  const std::size_t blocks = e.size() / t.block_len;
  std::vector<std::uint64_t> nu(t.pi.size(), 0);
  for (std::size_t i = 0; i < blocks; i++) {
    std::size_t run = 0, longest = 0;
    for (std::size_t j = 0; j < t.block_len; j++) {
      run = e[i * t.block_len + j] ? run + 1 : 0;
      longest = std::max(longest, run);
    }
    ++nu[std::clamp(longest, t.low, t.high) - t.low];
  }
  const double chi = detail::chi_squared(nu, t.pi, static_cast<double>(blocks));
  const double k = static_cast<double>(t.pi.size() - 1);
  return detail::single("LongestRun", special::igamc(k / 2.0, chi / 2.0), alpha);
}

enum class Direction
{
  forward,
  reverse,
};

inline double
cumulative_sums_p(BitSpan e, Direction dir)
{
  detail::require("CumulativeSums", 1, e.size());
  const long long n = static_cast<long long>(e.size());
  long long s = 0, z = 0;
  for (long long i = 0; i < n; i++) {
    const auto b = dir == Direction::forward ? e[static_cast<std::size_t>(i)] : e[static_cast<std::size_t>(n - 1 - i)];
    s += b ? 1 : -1;
    z = std::max(z, s < 0 ? -s : s);
  }
  const double sq = std::sqrt(static_cast<double>(n));
  const double zd = static_cast<double>(z);
  using special::normal_cdf;
  // Summation bounds use truncating integer division.
  double sum1 = 0.0;
  for (long long k = (-n / z + 1) / 4; k <= (n / z - 1) / 4; k++) {
    sum1 += normal_cdf(static_cast<double>(4 * k + 1) * zd / sq) - normal_cdf(static_cast<double>(4 * k - 1) * zd / sq);
  }
  double sum2 = 0.0;
  for (long long k = (-n / z - 3) / 4; k <= (n / z - 1) / 4; k++) {
    sum2 += normal_cdf(static_cast<double>(4 * k + 3) * zd / sq) - normal_cdf(static_cast<double>(4 * k + 1) * zd / sq);
  }
  return std::clamp(1.0 - sum1 + sum2, 0.0, 1.0);
}

inline TestReport
cumulative_sums_test(BitSpan e, Direction dir, double alpha = default_alpha)
{
  const char* label = dir == Direction::forward ? "forward" : "reverse";
  return TestReport{ "CumulativeSums", { PValue{ label, cumulative_sums_p(e, dir) } }, alpha, {} };
}

// Both directions in one report.
inline TestReport
cumulative_sums_test(BitSpan e, double alpha = default_alpha)
{
  return TestReport{ "CumulativeSums",
                     { PValue{ "forward", cumulative_sums_p(e, Direction::forward) },
                       PValue{ "reverse", cumulative_sums_p(e, Direction::reverse) } },
                     alpha,
                     {} };
}

// Rank over GF(2) of a 32x32 matrix, one row per word.
inline unsigned
gf2_rank(std::array<std::uint32_t, 32> rows) noexcept
{
  unsigned rank = 0;
  for (int bit = 31; bit >= 0 && rank < 32; bit--) {
    const std::uint32_t m = std::uint32_t{ 1 } << bit;
    unsigned piv = rank;
    while (piv < 32 && !(rows[piv] & m)) piv++;
    if (piv == 32) continue;
    std::swap(rows[rank], rows[piv]);
    for (unsigned i = rank + 1; i < 32; i++) {
      if (rows[i] & m) rows[i] ^= rows[rank];
    }
    rank++;
  }
  return rank;
}

// Probability that a random 32x32 GF(2) matrix has rank r.
inline double
rank_probability(unsigned r)
{
  constexpr int M = 32, Q = 32;
  double p = std::exp2(static_cast<double>(static_cast<int>(r) * (Q + M - static_cast<int>(r)) - M * Q));
  for (int i = 0; i < static_cast<int>(r); i++) {
    p *= (1.0 - std::exp2(i - Q)) * (1.0 - std::exp2(i - M)) / (1.0 - std::exp2(i - static_cast<int>(r)));
  }
  return p;
}

inline TestReport
rank_test(BitSpan e, double alpha = default_alpha)
{
  constexpr std::size_t matrix_bits = 32 * 32;
  detail::require("Rank", matrix_bits, e.size());
  const std::size_t matrices = e.size() / matrix_bits;
  std::array<std::uint64_t, 3> f{}; // rank 32, rank 31, lower
  for (std::size_t k = 0; k < matrices; k++) {
    std::array<std::uint32_t, 32> rows{};
    for (std::size_t i = 0; i < 32; i++) {
      std::uint32_t w = 0;
      for (std::size_t j = 0; j < 32; j++) w = (w << 1) | e[k * matrix_bits + 32 * i + j];
      rows[i] = w;
    }
    const unsigned r = gf2_rank(rows);
    ++f[r == 32 ? 0 : r == 31 ? 1 : 2];
  }
  const double p32 = rank_probability(32), p31 = rank_probability(31);
  const std::array<double, 3> pi{ p32, p31, 1.0 - p32 - p31 };
  const double chi = detail::chi_squared(f, pi, static_cast<double>(matrices));
  return detail::single("Rank", std::exp(-chi / 2.0), alpha);
}

namespace detail {

inline double
psi_squared(const std::vector<std::uint64_t>& counts, std::size_t n)
{
  double sum = 0.0;
  for (auto c : counts) sum += static_cast<double>(c) * static_cast<double>(c);
  return static_cast<double>(counts.size()) / static_cast<double>(n) * sum - static_cast<double>(n);
}

} // namespace detail

inline TestReport
serial_test(BitSpan e, unsigned m = 16, double alpha = default_alpha)
{
  if (m < 1 || m > 24) throw RangeError("Serial: m must be in [1, 24]");
  detail::require("Serial", std::size_t{ 1 } << m, e.size());
  const std::size_t n = e.size();
  auto c = detail::pattern_counts(e, m);
  const double psi_m = detail::psi_squared(c, n);
  double psi_m1 = 0.0, psi_m2 = 0.0;
  if (m >= 2) {
    c = detail::fold_counts(c);
    psi_m1 = detail::psi_squared(c, n);
  }
  if (m >= 3) {
    c = detail::fold_counts(c);
    psi_m2 = detail::psi_squared(c, n);
  }
  const double d1 = psi_m - psi_m1;
  const double d2 = psi_m - 2.0 * psi_m1 + psi_m2;
  const double p1 = special::igamc(std::exp2(static_cast<double>(m) - 2.0), std::max(d1, 0.0) / 2.0);
  const double p2 = special::igamc(std::exp2(static_cast<double>(m) - 3.0), std::max(d2, 0.0) / 2.0);
  return TestReport{ "Serial", { PValue{ "p1", p1 }, PValue{ "p2", p2 } }, alpha, {} };
}

inline TestReport
approximate_entropy_test(BitSpan e, unsigned m = 10, double alpha = default_alpha)
{
  if (m < 1 || m > 23) throw RangeError("ApproximateEntropy: m must be in [1, 23]");
  detail::require("ApproximateEntropy", m + 1, e.size());
  const std::size_t n = e.size();
  const double nd = static_cast<double>(n);
  auto phi = [&](const std::vector<std::uint64_t>& counts) {
    double s = 0.0;
    for (auto c : counts) {
      if (c) s += static_cast<double>(c) / nd * std::log(static_cast<double>(c) / nd);
    }
    return s;
  };
  const auto c_m1 = detail::pattern_counts(e, m + 1);
  const double phi_m1 = phi(c_m1);
  const double phi_m = phi(detail::fold_counts(c_m1));
  const double apen = phi_m - phi_m1;
  const double chi = 2.0 * nd * (std::log(2.0) - apen);
  TestReport r = detail::single("ApproximateEntropy",
                                special::igamc(std::exp2(static_cast<double>(m) - 1.0), std::max(chi, 0.0) / 2.0), alpha);
  return r;
}

// Length of the shortest LFSR generating `s` (Berlekamp-Massey over GF(2)),
// with the connection polynomials held as packed bit vectors.
inline std::size_t
berlekamp_massey(BitSpan s)
{
  const std::size_t n = s.size();
  if (n == 0) return 0;
  const std::size_t words = n / 64 + 2;
  // r holds s reversed: bit k of r is s[n - 1 - k].
  std::vector<std::uint64_t> r(words + 1, 0), c(words, 0), b(words, 0), t(words);
  for (std::size_t k = 0; k < n; k++) r[k / 64] |= std::uint64_t{ s[n - 1 - k] & 1u } << (k % 64);
  c[0] = b[0] = 1;
  std::size_t len = 0;
  std::ptrdiff_t m = -1;
  auto window = [&](std::size_t pos) {
    const std::size_t w = pos / 64, sh = pos % 64;
    return sh == 0 ? r[w] : (r[w] >> sh) | (r[w + 1] << (64 - sh));
  };
  for (std::size_t i = 0; i < n; i++) {
    // discrepancy = sum_{j=0..len} c_j s[i - j], and s[i - j] = r bit (n - 1 - i + j)
    const std::size_t off = n - 1 - i;
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w <= len / 64; w++) acc ^= c[w] & window(off + 64 * w);
    if (!(std::popcount(acc) & 1)) continue;

    const std::size_t shift = i - static_cast<std::size_t>(m);
    const std::size_t ws = shift / 64, bs = shift % 64;
    const bool grow = 2 * len <= i;
    if (grow) t = c;
    for (std::size_t w = words; w-- > ws;) {
      std::uint64_t v = b[w - ws] << bs;
      if (bs && w > ws) v |= b[w - ws - 1] >> (64 - bs);
      c[w] ^= v;
    }
    if (grow) {
      len = i + 1 - len;
      m = static_cast<std::ptrdiff_t>(i);
      std::swap(b, t);
    }
  }
  return len;
}

inline TestReport
linear_complexity_test(BitSpan e, std::size_t block_len = 500, double alpha = default_alpha)
{
  if (block_len < 2) throw RangeError("LinearComplexity: block length must be at least 2");
  detail::require("LinearComplexity", block_len, e.size());
  const std::size_t blocks = e.size() / block_len;
  const double M = static_cast<double>(block_len);
  const double sign = block_len % 2 ? -1.0 : 1.0;
  const double mu = M / 2.0 + (9.0 - sign) / 36.0 - (M / 3.0 + 2.0 / 9.0) / std::exp2(M);
  std::vector<std::uint64_t> nu(7, 0);
  for (std::size_t i = 0; i < blocks; i++) {
    const auto len = berlekamp_massey(e.subspan(i * block_len, block_len));
    const double t = sign * (static_cast<double>(len) - mu) + 2.0 / 9.0;
    std::size_t cls;
    if (t <= -2.5) cls = 0;
    else if (t <= -1.5) cls = 1;
    else if (t <= -0.5) cls = 2;
    else if (t <= 0.5) cls = 3;
    else if (t <= 1.5) cls = 4;
    else if (t <= 2.5) cls = 5;
    else cls = 6;
    ++nu[cls];
  }
  // Class probabilities as tabulated by the reference suite (sts 2.1.2).
  static constexpr std::array<double, 7> pi{ 0.01047, 0.03125, 0.12500, 0.50000, 0.25000, 0.06250, 0.020833 };
  const double chi = detail::chi_squared(nu, pi, static_cast<double>(blocks));
  return detail::single("LinearComplexity", special::igamc(3.0, chi / 2.0), alpha);
}

struct SuiteParams
{
  double alpha = default_alpha;
  std::size_t block_frequency_len = 128;
  unsigned serial_m = 16;
  unsigned apen_m = 10;
  std::size_t linear_complexity_len = 500;
  double uniformity_alpha = 0.0001; // second-level threshold on the p-value histogram
};

// Tests not implemented here; the suite report lists them as delegated.
inline const std::vector<std::string>&
delegated_tests()
{
  static const std::vector<std::string> names{ "FFT", "NonOverlappingTemplate", "OverlappingTemplate" };
  return names;
}

// All nine tests on one stream.
inline std::vector<TestReport>
run_all(BitSpan e, const SuiteParams& p = {})
{
  return {
    frequency_test(e, p.alpha),
    block_frequency_test(e, p.block_frequency_len, p.alpha),
    cumulative_sums_test(e, p.alpha),
    runs_test(e, p.alpha),
    longest_run_test(e, p.alpha),
    rank_test(e, p.alpha),
    approximate_entropy_test(e, p.apen_m, p.alpha),
    serial_test(e, p.serial_m, p.alpha),
    linear_complexity_test(e, p.linear_complexity_len, p.alpha),
  };
}

struct ProportionInterval
{
  double lower;
  double upper;
};

// p_hat +- 3 sqrt(p_hat (1 - p_hat) / m), p_hat = 1 - alpha.
inline ProportionInterval
proportion_interval(double alpha, std::size_t streams)
{
  const double p = 1.0 - alpha;
  const double d = 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(streams));
  return { p - d, p + d };
}

// Second-level check: chi-square of the p-value histogram over ten bins.
inline double
uniformity_p_value(std::span<const double> p_values)
{
  if (p_values.empty()) throw ValidationError("uniformity check needs at least one p-value");
  std::array<std::uint64_t, 10> bins{};
  for (double p : p_values) ++bins[std::min<std::size_t>(9, static_cast<std::size_t>(p * 10.0))];
  std::array<double, 10> pi;
  pi.fill(0.1);
  const double chi = detail::chi_squared(bins, pi, static_cast<double>(p_values.size()));
  return special::igamc(4.5, chi / 2.0);
}

struct SuiteRow
{
  std::string test; // e.g. "Serial (p1)"
  std::vector<double> p_values; // by stream index
  std::size_t passed = 0;
  double proportion = 0.0;
  double uniformity_p = 0.0;
  bool proportion_ok = false;
  bool uniformity_ok = false;

  bool ok() const noexcept { return proportion_ok && uniformity_ok; }
};

struct SuiteReport
{
  std::vector<SuiteRow> rows;
  std::size_t streams = 0;
  std::size_t bits_per_stream = 0;
  SuiteParams params;
  ProportionInterval interval{};

  bool passed() const noexcept
  {
    return std::all_of(rows.begin(), rows.end(), [](const SuiteRow& r) { return r.ok(); });
  }
};

// Collects per-stream reports (in any order) and produces the suite report
// ordered by test and by stream index.
class SuiteAccumulator
{
public:
  explicit SuiteAccumulator(SuiteParams params = {})
    : params_(params)
  {
  }

  void add(std::size_t stream_index, std::size_t bits, const std::vector<TestReport>& reports)
  {
    if (!by_stream_.emplace(stream_index, reports).second) {
      throw ValidationError("stream " + std::to_string(stream_index) + " reported twice");
    }
    bits_ = bits_ ? std::min(bits_, bits) : bits;
  }

  void add_stream(std::size_t stream_index, BitSpan e) { add(stream_index, e.size(), run_all(e, params_)); }

  std::size_t size() const noexcept { return by_stream_.size(); }

  SuiteReport finish() const
  {
    if (by_stream_.size() < 2) {
      throw InsufficientData("suite (streams)", 2, by_stream_.size());
    }
    SuiteReport rep;
    rep.streams = by_stream_.size();
    rep.bits_per_stream = bits_;
    rep.params = params_;
    rep.interval = proportion_interval(params_.alpha, rep.streams);

    std::vector<std::string> order;
    std::map<std::string, SuiteRow> rows;
    for (const auto& [idx, reports] : by_stream_) {
      for (const auto& r : reports) {
        for (const auto& pv : r.p_values) {
          const std::string key = pv.label.empty() ? r.name : r.name + " (" + pv.label + ")";
          auto [it, inserted] = rows.try_emplace(key);
          if (inserted) {
            order.push_back(key);
            it->second.test = key;
          }
          it->second.p_values.push_back(pv.p);
          if (pv.p >= params_.alpha) ++it->second.passed;
        }
      }
    }
    for (const auto& key : order) {
      SuiteRow row = std::move(rows[key]);
      row.proportion = static_cast<double>(row.passed) / static_cast<double>(row.p_values.size());
      row.proportion_ok = row.proportion >= rep.interval.lower;
      row.uniformity_p = uniformity_p_value(row.p_values);
      row.uniformity_ok = row.uniformity_p >= params_.uniformity_alpha;
      rep.rows.push_back(std::move(row));
    }
    return rep;
  }

private:
  SuiteParams params_;
  std::map<std::size_t, std::vector<TestReport>> by_stream_;
  std::size_t bits_ = 0;
};

inline SuiteReport
run_suite(std::span<const BitStream> streams, const SuiteParams& params = {})
{
  if (streams.size() < 2) throw InsufficientData("suite (streams)", 2, streams.size());
  SuiteAccumulator acc(params);
  for (std::size_t i = 0; i < streams.size(); i++) acc.add_stream(i, streams[i].bits());
  return acc.finish();
}

} // namespace bsprng::stats
