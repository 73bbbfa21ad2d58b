// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only if all
// pass. Optional arguments select criteria by number, e.g. `acceptance 1 3 8`.

#include "support.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace bsprng;

namespace {

struct Outcome
{
  bool pass = false;
  std::string detail;
};

constexpr std::size_t instances = 1000;
constexpr std::size_t oracle_bits = 10000;
constexpr std::size_t oracle_bytes = oracle_bits / 8;

const auto accept_seed =
  seedgen::MasterSeed::from_hex("5eed00000000000000000000000000000000000000000000000000000000a001");

// --- 1. oracle equivalence ------------------------------------------------

template<SliceWord W>
std::size_t
mickey_mismatches(std::mt19937_64& rng)
{
  constexpr std::size_t L = lanes_v<W>;
  std::size_t bad = 0;
  for (std::size_t base = 0; base < instances; base += L) {
    const std::size_t n = std::min(L, instances - base);
    std::vector<mickey::KeyIv> m;
    for (std::size_t j = 0; j < n; j++) {
      const std::size_t ivb = rng() % 81;
      m.push_back(mickey::KeyIv::make(testsupport::random_bytes(rng, 10), testsupport::random_bytes(rng, (ivb + 7) / 8), ivb));
    }
    auto st = mickey::sliced_init<W>(m);
    std::vector<W> words(oracle_bits);
    mickey::sliced_generate<W>(st, words);
    const auto lanes = words_to_lane_bytes<W>(std::span<const W>(words), BitOrder::msb_first);
    for (std::size_t j = 0; j < n; j++) {
      auto ref = mickey::scalar_init(m[j]);
      bad += lanes[j] != mickey::scalar_keystream_bytes(ref, oracle_bytes);
    }
  }
  return bad;
}

template<SliceWord W>
std::size_t
grain_mismatches(std::mt19937_64& rng)
{
  constexpr std::size_t L = lanes_v<W>;
  std::size_t bad = 0;
  for (std::size_t base = 0; base < instances; base += L) {
    const std::size_t n = std::min(L, instances - base);
    std::vector<grain::KeyIv> m;
    for (std::size_t j = 0; j < n; j++) {
      m.push_back(grain::KeyIv::make(testsupport::random_bytes(rng, 10), testsupport::random_bytes(rng, 8)));
    }
    auto st = grain::sliced_init<W>(m);
    std::vector<W> words(oracle_bits);
    grain::sliced_generate<W>(st, words);
    const auto lanes = words_to_lane_bytes<W>(std::span<const W>(words), BitOrder::lsb_first);
    for (std::size_t j = 0; j < n; j++) {
      auto ref = grain::scalar_init(m[j]);
      bad += lanes[j] != grain::scalar_keystream_bytes(ref, oracle_bytes);
    }
  }
  return bad;
}

template<SliceWord W>
std::size_t
aes_mismatches(std::mt19937_64& rng)
{
  std::size_t bad = 0;
  for (std::size_t i = 0; i < instances; i++) {
    const auto key = aes::make_key(testsupport::random_bytes(rng, 16));
    const auto nonce = aes::make_nonce(testsupport::random_bytes(rng, 12));
    const std::uint64_t first = rng() % 1000000;
    bad += aes::ctr_keystream<W>(key, nonce, oracle_bytes, first) !=
           aes::ctr_keystream_scalar(key, nonce, oracle_bytes, first);
  }
  return bad;
}

template<SliceWord W>
std::size_t
lfsr_mismatches(std::mt19937_64& rng)
{
  constexpr std::size_t L = lanes_v<W>;
  const std::size_t degrees[] = { 4, 8, 16, 24 };
  std::size_t bad = 0;
  for (std::size_t base = 0; base < instances; base += L) {
    const std::size_t n = std::min(L, instances - base);
    const auto spec = primitive_spec(degrees[rng() % 4], rng() & 1 ? LfsrConfig::galois : LfsrConfig::fibonacci);
    std::vector<Bits> seeds;
    for (std::size_t j = 0; j < n; j++) seeds.push_back(testsupport::random_bits(rng, spec.degree()));
    auto sl = SlicedLfsr<W>::from_lane_states(spec, seeds);
    const auto out = sl.generate(oracle_bits);
    for (std::size_t j = 0; j < n; j++) {
      ScalarLfsr ref(spec, seeds[j]);
      bad += extract_lane(out, j) != ref.generate(oracle_bits);
    }
  }
  return bad;
}

template<SliceWord W>
std::size_t
crc_mismatches(std::mt19937_64& rng)
{
  constexpr std::size_t L = lanes_v<W>;
  std::size_t bad = 0;
  for (std::size_t base = 0; base < instances; base += L) {
    const std::size_t n = std::min(L, instances - base);
    const CrcSpec spec{ static_cast<std::uint8_t>(rng() | 1), static_cast<std::uint8_t>(rng()), (rng() & 1) != 0,
                        (rng() & 1) != 0, static_cast<std::uint8_t>(rng()) };
    std::vector<Bytes> msgs;
    for (std::size_t j = 0; j < n; j++) msgs.push_back(testsupport::random_bytes(rng, oracle_bytes));
    const auto got = crc8_sliced<W>(spec, msgs);
    for (std::size_t j = 0; j < n; j++) bad += got[j] != crc8_scalar(spec, msgs[j]);
  }
  return bad;
}

Outcome
oracle_equivalence()
{
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  std::ostringstream d;
  std::size_t total = 0;
  auto both = [&](const char* name, auto f32, auto f64) {
    const std::size_t a = f32(rng), b = f64(rng);
    total += a + b;
    d << name << " " << a << "+" << b << " ";
  };
  both("lfsr", lfsr_mismatches<std::uint32_t>, lfsr_mismatches<std::uint64_t>);
  both("crc8", crc_mismatches<std::uint32_t>, crc_mismatches<std::uint64_t>);
  both("mickey", mickey_mismatches<std::uint32_t>, mickey_mismatches<std::uint64_t>);
  both("grain", grain_mismatches<std::uint32_t>, grain_mismatches<std::uint64_t>);
  both("aes-ctr", aes_mismatches<std::uint32_t>, aes_mismatches<std::uint64_t>);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream out;
  out << instances << " instances x " << oracle_bits << " bits per algorithm at W=32 and W=64; mismatches (W32+W64): "
      << d.str() << "; " << std::fixed << std::setprecision(1) << secs << " s";
  return { total == 0 && secs < 120.0, out.str() };
}

// --- 2. published vectors ----------------------------------------------------

Outcome
published_vectors()
{
  std::size_t ok = 0;
  std::string failed;
  for (const auto& v : vectors::embedded()) {
    if (vectors::verify(v).ok()) {
      ++ok;
    } else {
      failed += " " + v.source;
    }
  }
  const auto n = vectors::embedded().size();
  return { ok == n, std::to_string(ok) + "/" + std::to_string(n) +
                      " vectors reproduced by scalar and every lane of W=32/W=64 engines" +
                      (failed.empty() ? "" : "; failed:" + failed) };
}

// --- 3. LFSR full period -------------------------------------------------------

Outcome
lfsr_full_period()
{
  bool pass = true;
  std::ostringstream d;
  for (std::size_t n : { 4u, 8u, 16u }) {
    for (auto cfg : { LfsrConfig::fibonacci, LfsrConfig::galois }) {
      const auto spec = primitive_spec(n, cfg);
      Bits seed(n, 0);
      seed[0] = 1;
      const auto p = period_bruteforce(spec, seed);
      pass = pass && p == (std::uint64_t{ 1 } << n) - 1;
      if (cfg == LfsrConfig::fibonacci) d << spec.polynomial() << " -> " << p << "  ";
    }
  }
  d << "(Galois form identical)";
  return { pass, d.str() };
}

// --- 4. statistical suite --------------------------------------------------------

Outcome
statistical_suite()
{
  constexpr std::size_t streams = 100, bits = 1000000, L = 64;
  const auto t0 = std::chrono::steady_clock::now();
  const stats::SuiteParams params;
  stats::SuiteAccumulator acc(params);
  std::mutex mu;
  std::atomic<std::size_t> next{ 0 };
  const std::size_t batches = (streams + L - 1) / L;
  std::vector<std::vector<Bytes>> lane_bytes(batches);
  for (std::size_t b = 0; b < batches; b++) {
    StreamConfig c;
    c.algo = seedgen::Algo::mickey;
    c.impl = Impl::sliced;
    c.lanes = L;
    c.seed = seedgen::child_seed(accept_seed, static_cast<std::uint32_t>(b));
    lane_bytes[b] = lane_streams(c, bits / 8);
  }
  auto work = [&] {
    for (std::size_t i = next++; i < streams; i = next++) {
      const Bits e = unpack_bits(lane_bytes[i / L][i % L], bits, BitOrder::msb_first);
      auto reports = stats::run_all(e, params);
      std::lock_guard<std::mutex> g(mu);
      acc.add(i, bits, reports);
    }
  };
  const unsigned workers = std::max(1u, std::min(16u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; w++) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  const auto rep = acc.finish();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::ostringstream d;
  double worst_prop = 1.0, worst_unif = 1.0;
  std::string worst_prop_test, failing;
  for (const auto& r : rep.rows) {
    if (r.proportion < worst_prop) {
      worst_prop = r.proportion;
      worst_prop_test = r.test;
    }
    worst_unif = std::min(worst_unif, r.uniformity_p);
    if (!r.ok()) failing += " " + r.test;
  }
  d << streams << " sliced MICKEY streams x " << bits << " bits, " << rep.rows.size()
    << " rows; lowest proportion " << std::fixed << std::setprecision(2) << worst_prop << " (" << worst_prop_test
    << "), interval lower " << std::setprecision(4) << rep.interval.lower << ", lowest uniformity p "
    << std::setprecision(6) << worst_unif << "; " << std::setprecision(0) << secs << " s";
  if (!failing.empty()) d << "; failing:" << failing;
  return { rep.passed(), d.str() };
}

// --- 5 and 6. throughput -----------------------------------------------------------

bench::SuiteResult&
throughput_suite()
{
  static bench::SuiteResult result = [] {
    bench::SuiteConfig cfg;
    cfg.base.lanes = 64;
    cfg.base.nbytes = std::size_t{ 64 } << 20;
    cfg.base.repeats = 5;
    cfg.base.warmup = 1;
    cfg.base.workers = 1;
    for (auto algo : cfg.algos) {
      for (auto impl : cfg.impls) {
        auto c = cfg.base;
        c.algo = algo;
        c.impl = impl;
        bench::correctness_gate(c);
      }
    }
    auto r = bench::compare_suite(cfg);
    for (const auto& row : r.rows) {
      std::printf("      %-8s %-7s %8.4f Gbit/s  median %.3f s\n", row.algorithm.c_str(),
                  std::string(bench::impl_name(row.impl)).c_str(), row.gbps, row.seconds);
    }
    return r;
  }();
  return result;
}

Outcome
speedup()
{
  const auto& s = throughput_suite();
  const double m = s.find("mickey", Impl::sliced)->speedup;
  const double g = s.find("grain", Impl::sliced)->speedup;
  const double a = s.find("aes-ctr", Impl::sliced)->speedup;
  std::ostringstream d;
  d << std::fixed << std::setprecision(2) << "W=64, 64 MiB, median of 5: mickey " << m << "x (>= 8), grain " << g
    << "x (>= 8), aes-ctr " << a << "x (>= 2)";
  return { m >= 8.0 && g >= 8.0 && a >= 2.0, d.str() };
}

Outcome
ordering()
{
  const auto& s = throughput_suite();
  const double m = s.find("mickey", Impl::sliced)->gbps;
  const double g = s.find("grain", Impl::sliced)->gbps;
  const double a = s.find("aes-ctr", Impl::sliced)->gbps;
  std::ostringstream d;
  d << std::fixed << std::setprecision(3) << "sliced Gbit/s: mickey " << m << ", grain " << g << ", aes-ctr " << a
    << "; mickey > aes " << (m > a ? "yes" : "no") << ", grain > aes " << (g > a ? "yes" : "no");
  return { s.stream_ciphers_ahead_of_aes(), d.str() };
}

// --- 7. structural instrumentation ---------------------------------------------------

template<typename U>
std::uint64_t
mickey_clock_cost(std::uint64_t seed_value, bool& constant)
{
  using C = CountedWord<U>;
  std::mt19937_64 rng(seed_value);
  std::vector<mickey::KeyIv> m;
  for (std::size_t j = 0; j < lanes_v<C>; j++) {
    m.push_back(mickey::KeyIv::make(testsupport::random_bytes(rng, 10), testsupport::random_bytes(rng, 10)));
  }
  auto st = mickey::sliced_init<C>(m);
  std::uint64_t first = 0;
  constant = true;
  for (int t = 0; t < 64; t++) {
    const auto before = op_counters.total();
    st.template clock<false>(zero_word<C>());
    const auto cost = op_counters.total() - before;
    if (t == 0) first = cost;
    constant = constant && cost == first;
  }
  return first;
}

Outcome
instrumentation()
{
  bool pass = true;
  std::ostringstream d;

  d << "LFSR XORs/step (taps-1) at W=32/64:";
  for (std::size_t n : { 4u, 8u, 16u, 24u }) {
    const auto spec = primitive_spec(n);
    const auto a = xor_op_count_per_step(SlicedLfsr<std::uint32_t>::from_lane_states(spec, { Bits(n, 1) }));
    const auto b = xor_op_count_per_step(SlicedLfsr<std::uint64_t>::from_lane_states(spec, { Bits(n, 1) }));
    pass = pass && a == b && a == spec.tap_count() - 1;
    d << " " << a << "/" << b;
  }

  aes::SlicedState<CountedWord<std::uint64_t>> st{};
  const auto before = op_counters.total();
  st = aes::shift_rows_sliced(st);
  const auto shift_ops = op_counters.total() - before;
  pass = pass && shift_ops == 0;
  d << "; ShiftRows ops " << shift_ops;

  // CountedWord has no conversion to bool, so the sliced MICKEY engine
  // compiling on it already rules out branches on lane data. The cost of a
  // clock must also be the same for every state.
  bool c32 = false, c64 = false, c64b = false;
  const auto k32 = mickey_clock_cost<std::uint32_t>(1, c32);
  const auto k64 = mickey_clock_cost<std::uint64_t>(2, c64);
  const auto k64b = mickey_clock_cost<std::uint64_t>(3, c64b);
  pass = pass && c32 && c64 && c64b && k32 == k64 && k64 == k64b;
  d << "; MICKEY word ops/clock " << k32 << " (W=32) " << k64 << " (W=64), data independent "
    << (c32 && c64 && c64b && k64 == k64b ? "yes" : "no");
  return { pass, d.str() };
}

// --- 8. NIST worked examples ----------------------------------------------------------

Outcome
worked_examples()
{
  using namespace stats;
  const char* eps100 =
    "1100100100001111110110101010001000100001011010001100001000110100110001001100011001100010100010111000";
  const char* eps128 = "1100110000010101011011000100110011100000000000100100110101010001000100111101011010000000110101"
                       "1111001100111001101101100010110010";
  auto s = [](const char* b) { return BitStream::from_string(b); };
  auto p = [](const TestReport& r, const std::string& label = {}) {
    for (const auto& v : r.p_values) {
      if (v.label == label) return v.p;
    }
    return -1.0;
  };
  const auto& e = testsupport::e_bits();
  const Bits e100k(e.begin(), e.begin() + 100000);

  struct Case
  {
    const char* name;
    double got, want;
  };
  const auto cusum = cumulative_sums_test(s(eps100));
  const auto serial = serial_test(s("0011011101"), 3);
  const std::vector<Case> cases{
    { "Frequency (n=10)", p(frequency_test(s("1011010101"))), 0.527089 },
    { "Frequency (n=100)", p(frequency_test(s(eps100))), 0.109599 },
    { "BlockFrequency (M=3)", p(block_frequency_test(s("0110011010"), 3)), 0.801252 },
    { "BlockFrequency (M=10)", p(block_frequency_test(s(eps100), 10)), 0.706438 },
    { "Runs (n=10)", p(runs_test(s("1001101011"))), 0.147232 },
    { "Runs (n=100)", p(runs_test(s(eps100))), 0.500798 },
    { "LongestRun (n=128)", p(longest_run_test(s(eps128))), 0.180609 },
    { "CumulativeSums fwd (n=10)", p(cumulative_sums_test(s("1011010111"), Direction::forward), "forward"), 0.4116588 },
    { "CumulativeSums fwd (n=100)", p(cusum, "forward"), 0.219194 },
    { "CumulativeSums rev (n=100)", p(cusum, "reverse"), 0.114866 },
    { "Rank (e, n=100000)", p(rank_test(e100k)), 0.532069 },
    { "Serial p1 (m=3)", p(serial, "p1"), 0.808792 },
    { "Serial p2 (m=3)", p(serial, "p2"), 0.670320 },
    { "ApproximateEntropy (m=3)", p(approximate_entropy_test(s("0100110101"), 3)), 0.261961 },
    { "ApproximateEntropy (m=2, n=100)", p(approximate_entropy_test(s(eps100), 2)), 0.235301 },
    { "LinearComplexity (e, M=1000)", p(linear_complexity_test(e, 1000)), 0.845406 },
  };
  bool pass = true;
  double worst = 0.0;
  std::string worst_name, bad;
  for (const auto& c : cases) {
    const double diff = std::fabs(c.got - c.want);
    if (diff > worst) {
      worst = diff;
      worst_name = c.name;
    }
    if (diff > 1e-6) {
      pass = false;
      bad += std::string(" ") + c.name;
    }
  }
  const bool bm = berlekamp_massey(s("1101011110001")) == 4;
  pass = pass && bm;
  std::ostringstream d;
  d << cases.size() << " p-values within 1e-6 (largest deviation " << std::scientific << std::setprecision(1) << worst
    << ", " << worst_name << "); Berlekamp-Massey L=4 " << (bm ? "ok" : "wrong");
  if (!bad.empty()) d << "; off:" << bad;
  return { pass, d.str() };
}

} // namespace

int
main(int argc, char** argv)
{
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
    { "oracle equivalence", oracle_equivalence },
    { "published vectors", published_vectors },
    { "LFSR full period", lfsr_full_period },
    { "statistical suite", statistical_suite },
    { "speedup over naive", speedup },
    { "stream ciphers ahead of AES-CTR", ordering },
    { "structural instrumentation", instrumentation },
    { "NIST worked examples", worked_examples },
  };
  std::set<std::size_t> wanted;
  for (int i = 1; i < argc; i++) wanted.insert(std::stoul(argv[i]));

  std::size_t failed = 0;
  for (std::size_t k = 0; k < criteria.size(); k++) {
    if (!wanted.empty() && !wanted.count(k + 1)) continue;
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& ex) {
      o = { false, std::string("exception: ") + ex.what() };
    }
    failed += !o.pass;
    std::printf("%s  %zu. %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
