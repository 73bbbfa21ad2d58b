#pragma once

#include <bsprng/aes_ctr.hpp>
#include <bsprng/error.hpp>
#include <bsprng/grain.hpp>
#include <bsprng/mickey.hpp>
#include <bsprng/seedgen.hpp>
#include <bsprng/streams.hpp>

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <memory>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

// Throughput harness: naive bit-serial engines against bitsliced ones.
//
// Timed region: keystream generation into a reusable buffer, folded into a
// checksum so the work cannot be elided. Lane-material derivation, engine
// initialisation and the final transposition out of the sliced layout are
// not timed.
namespace bsprng::bench {

inline constexpr std::size_t min_bytes = std::size_t{ 1 } << 20;
inline constexpr std::size_t gate_bytes = 4096;
inline constexpr const char* schema_id = "bsprng-bench/1";

inline std::string_view
impl_name(Impl i) noexcept
{
  return i == Impl::naive ? "naive" : "sliced";
}

inline Impl
parse_impl(std::string_view s)
{
  if (s == "naive") return Impl::naive;
  if (s == "sliced") return Impl::sliced;
  throw ValidationError("unknown engine '" + std::string(s) + "' (naive, sliced)");
}

struct BenchResult
{
  std::string algorithm;
  Impl impl = Impl::sliced;
  std::size_t lanes = 64;
  std::size_t workers = 1;
  std::uint64_t bytes = 0; // per timed run, all workers
  double seconds = 0.0;    // median
  std::vector<double> runs;
  double gbps = 0.0;
  double speedup = 0.0; // vs the paired naive run; 0 when not paired
  std::uint64_t checksum = 0;
};

struct MeasureConfig
{
  seedgen::Algo algo = seedgen::Algo::mickey;
  Impl impl = Impl::sliced;
  std::size_t lanes = 64;
  std::size_t nbytes = std::size_t{ 64 } << 20;
  std::size_t warmup = 1;
  std::size_t repeats = 5;
  std::size_t buffer_bytes = std::size_t{ 64 } << 10;
  std::size_t workers = 1;
  seedgen::MasterSeed seed = seedgen::MasterSeed::from_hex(
    "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f");
};

namespace detail {

inline std::uint64_t
fold(std::span<const std::uint8_t> bytes) noexcept
{
  std::uint64_t acc = 0;
  std::size_t i = 0;
  for (; i + 8 <= bytes.size(); i += 8) {
    std::uint64_t w;
    std::memcpy(&w, bytes.data() + i, 8);
    acc ^= w;
  }
  for (; i < bytes.size(); i++) acc ^= std::uint64_t{ bytes[i] } << (8 * (i % 8));
  return acc;
}

// A generator positioned after initialisation; run() produces raw output in
// the engine's native layout.
class Kernel
{
public:
  virtual ~Kernel() = default;
  // Fills `buf` (size a multiple of the native unit) and returns its checksum.
  virtual std::uint64_t fill(std::span<std::uint8_t> buf) = 0;
  // Bytes per native unit (buffers are rounded to this).
  virtual std::size_t unit() const = 0;
  // Converts the first `bytes` produced by fill() into per-lane streams.
  virtual std::vector<Bytes> lanes_of(std::span<const std::uint8_t> native) const = 0;
  virtual std::size_t lane_count() const = 0;
};

class MickeyNaive final : public Kernel
{
public:
  explicit MickeyNaive(const mickey::KeyIv& k) : st_(mickey::scalar_init(k)) {}
  std::uint64_t fill(std::span<std::uint8_t> buf) override
  {
    mickey::scalar_keystream_bytes(st_, buf);
    return fold(buf);
  }
  std::size_t unit() const override { return 1; }
  std::vector<Bytes> lanes_of(std::span<const std::uint8_t> n) const override { return { Bytes(n.begin(), n.end()) }; }
  std::size_t lane_count() const override { return 1; }

private:
  mickey::ScalarState st_;
};

class GrainNaive final : public Kernel
{
public:
  explicit GrainNaive(const grain::KeyIv& k) : st_(grain::scalar_init(k)) {}
  std::uint64_t fill(std::span<std::uint8_t> buf) override
  {
    grain::scalar_keystream_bytes(st_, buf);
    return fold(buf);
  }
  std::size_t unit() const override { return 1; }
  std::vector<Bytes> lanes_of(std::span<const std::uint8_t> n) const override { return { Bytes(n.begin(), n.end()) }; }
  std::size_t lane_count() const override { return 1; }

private:
  grain::ScalarState st_;
};

class AesNaive final : public Kernel
{
public:
  AesNaive(const aes::Key& k, const aes::Nonce& n) : ks_(aes::key_expand(k)), nonce_(n) {}
  std::uint64_t fill(std::span<std::uint8_t> buf) override
  {
    for (std::size_t off = 0; off < buf.size(); off += aes::block_bytes) {
      aes::detail::check_counter_range(ctr_, 1);
      const auto c = aes::encrypt_block(ks_, aes::counter_block(nonce_, static_cast<std::uint32_t>(ctr_++)));
      std::memcpy(buf.data() + off, c.data(), aes::block_bytes);
    }
    return fold(buf);
  }
  std::size_t unit() const override { return aes::block_bytes; }
  std::vector<Bytes> lanes_of(std::span<const std::uint8_t> n) const override { return { Bytes(n.begin(), n.end()) }; }
  std::size_t lane_count() const override { return 1; }

private:
  aes::KeySchedule ks_;
  aes::Nonce nonce_;
  std::uint64_t ctr_ = 0;
};

// Stream ciphers: native layout is one word per clock.
template<SliceWord W, typename State, BitOrder Order>
class StreamSliced final : public Kernel
{
public:
  explicit StreamSliced(State st) : st_(std::move(st)) {}
  std::uint64_t fill(std::span<std::uint8_t> buf) override
  {
    words_.resize(buf.size() / sizeof(W));
    if constexpr (std::is_same_v<State, mickey::SlicedState<W>>) {
      mickey::sliced_generate<W>(st_, words_);
    } else {
      grain::sliced_generate<W>(st_, words_);
    }
    std::memcpy(buf.data(), words_.data(), buf.size());
    return fold(buf);
  }
  std::size_t unit() const override { return sizeof(W) * 8; }
  std::vector<Bytes> lanes_of(std::span<const std::uint8_t> n) const override
  {
    std::vector<W> w(n.size() / sizeof(W));
    std::memcpy(w.data(), n.data(), w.size() * sizeof(W));
    return words_to_lane_bytes<W>(std::span<const W>(w), Order);
  }
  std::size_t lane_count() const override { return lanes_v<W>; }

private:
  State st_;
  std::vector<W> words_;
};

// AES-CTR: native layout is one sliced state (128 words) per batch of
// `lanes` consecutive counters; lanes_of() returns the single CTR stream.
template<SliceWord W>
class AesSliced final : public Kernel
{
public:
  AesSliced(const aes::Key& k, const aes::Nonce& n) : gen_(k, n) {}
  std::uint64_t fill(std::span<std::uint8_t> buf) override
  {
    aes::SlicedState<W> st;
    for (std::size_t off = 0; off < buf.size(); off += sizeof(st)) {
      gen_.next_batch(st);
      std::memcpy(buf.data() + off, st.data(), sizeof(st));
    }
    return fold(buf);
  }
  std::size_t unit() const override { return sizeof(aes::SlicedState<W>); }
  std::vector<Bytes> lanes_of(std::span<const std::uint8_t> n) const override
  {
    Bytes out;
    aes::SlicedState<W> st;
    std::array<aes::Block, lanes_v<W>> blocks;
    for (std::size_t off = 0; off + sizeof(st) <= n.size(); off += sizeof(st)) {
      std::memcpy(st.data(), n.data() + off, sizeof(st));
      aes::sliced_to_blocks<W>(st, blocks);
      for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
    }
    return { out };
  }
  std::size_t lane_count() const override { return 1; }

private:
  aes::CtrGenerator<W> gen_;
};

template<SliceWord W>
std::unique_ptr<Kernel>
make_sliced(const MeasureConfig& c)
{
  constexpr std::size_t L = lanes_v<W>;
  switch (c.algo) {
    case seedgen::Algo::mickey: {
      std::vector<mickey::KeyIv> m;
      for (std::size_t j = 0; j < L; j++) m.push_back(seedgen::mickey_lane(c.seed, j, L));
      return std::make_unique<StreamSliced<W, mickey::SlicedState<W>, BitOrder::msb_first>>(mickey::sliced_init<W>(m));
    }
    case seedgen::Algo::grain: {
      std::vector<grain::KeyIv> m;
      for (std::size_t j = 0; j < L; j++) m.push_back(seedgen::grain_lane(c.seed, j, L));
      return std::make_unique<StreamSliced<W, grain::SlicedState<W>, BitOrder::lsb_first>>(grain::sliced_init<W>(m));
    }
    case seedgen::Algo::aes_ctr: {
      const auto m = seedgen::aes_lane(c.seed, 0, L);
      return std::make_unique<AesSliced<W>>(m.key, m.nonce);
    }
    case seedgen::Algo::lfsr: break;
  }
  throw ValidationError("benchmarks cover mickey, grain and aes-ctr");
}

inline std::unique_ptr<Kernel>
make_kernel(const MeasureConfig& c)
{
  if (c.impl == Impl::sliced) {
    return c.lanes == 32 ? make_sliced<std::uint32_t>(c) : make_sliced<std::uint64_t>(c);
  }
  switch (c.algo) {
    case seedgen::Algo::mickey: return std::make_unique<MickeyNaive>(seedgen::mickey_lane(c.seed, 0, c.lanes));
    case seedgen::Algo::grain: return std::make_unique<GrainNaive>(seedgen::grain_lane(c.seed, 0, c.lanes));
    case seedgen::Algo::aes_ctr: {
      const auto m = seedgen::aes_lane(c.seed, 0, c.lanes);
      return std::make_unique<AesNaive>(m.key, m.nonce);
    }
    case seedgen::Algo::lfsr: break;
  }
  throw ValidationError("benchmarks cover mickey, grain and aes-ctr");
}

inline std::size_t
round_up(std::size_t v, std::size_t unit) noexcept
{
  return (v + unit - 1) / unit * unit;
}

} // namespace detail

// Runs a fresh kernel for `gate_bytes` of output and compares every lane it
// produces with the other engine. Throws if they differ.
inline void
correctness_gate(const MeasureConfig& c)
{
  auto k = detail::make_kernel(c);
  Bytes native(detail::round_up(gate_bytes, k->unit()));
  k->fill(native);
  const auto lanes = k->lanes_of(native);

  StreamConfig ref;
  ref.algo = c.algo;
  ref.impl = c.impl == Impl::sliced ? Impl::naive : Impl::sliced;
  ref.lanes = c.lanes;
  ref.seed = c.seed;
  std::vector<Bytes> expected;
  if (c.algo == seedgen::Algo::aes_ctr) {
    const auto m = seedgen::aes_lane(c.seed, 0, c.lanes);
    expected.push_back(ref.impl == Impl::naive ? aes::ctr_keystream_scalar(m.key, m.nonce, lanes[0].size())
                       : c.lanes == 32         ? aes::ctr_keystream<std::uint32_t>(m.key, m.nonce, lanes[0].size())
                                               : aes::ctr_keystream<std::uint64_t>(m.key, m.nonce, lanes[0].size()));
  } else {
    expected = lane_streams(ref, lanes[0].size());
  }
  for (std::size_t j = 0; j < lanes.size(); j++) {
    if (detail::fold(lanes[j]) != detail::fold(expected[j]) || lanes[j] != expected[j]) {
      throw Error("correctness gate failed: " + std::string(seedgen::algo_name(c.algo)) + " " +
                  std::string(impl_name(c.impl)) + " lane " + std::to_string(j) +
                  " differs from the reference engine on the first " + std::to_string(gate_bytes) + " bytes");
    }
  }
}

inline BenchResult
measure(const MeasureConfig& c)
{
  if (c.nbytes < min_bytes) {
    throw ValidationError("benchmark size must be at least 1 MiB (got " + std::to_string(c.nbytes) + " bytes)");
  }
  if (c.repeats < 3) throw ValidationError("benchmark needs at least 3 repeats");
  if (c.lanes != 32 && c.lanes != 64) throw ValidationError("lane width must be 32 or 64");
  if (c.workers == 0) throw ValidationError("workers must be at least 1");
  if (c.buffer_bytes == 0) throw ValidationError("buffer size must be positive");

  correctness_gate(c);

  std::vector<std::unique_ptr<detail::Kernel>> kernels;
  for (std::size_t w = 0; w < c.workers; w++) {
    MeasureConfig wc = c;
    wc.seed = seedgen::child_seed(c.seed, static_cast<std::uint32_t>(w));
    kernels.push_back(detail::make_kernel(wc));
  }
  const std::size_t unit = kernels[0]->unit();
  const std::size_t buf_bytes = detail::round_up(std::min(c.buffer_bytes, c.nbytes), unit);
  const std::size_t per_run = detail::round_up(c.nbytes, buf_bytes);

  std::vector<std::uint64_t> sums(c.workers, 0);
  auto run_worker = [&](std::size_t w, std::size_t bytes) {
    Bytes buf(buf_bytes);
    std::uint64_t acc = 0;
    for (std::size_t done = 0; done < bytes; done += buf_bytes) acc ^= kernels[w]->fill(buf);
    sums[w] ^= acc;
  };
  auto run_all = [&](std::size_t bytes) {
    if (c.workers == 1) {
      run_worker(0, bytes);
      return;
    }
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < c.workers; w++) threads.emplace_back(run_worker, w, bytes);
    for (auto& t : threads) t.join();
  };

  // Warm-up runs are shorter than timed runs.
  for (std::size_t i = 0; i < c.warmup; i++) run_all(std::min(per_run, detail::round_up(std::size_t{ 4 } << 20, buf_bytes)));

  BenchResult r;
  r.algorithm = std::string(seedgen::algo_name(c.algo));
  r.impl = c.impl;
  r.lanes = c.lanes;
  r.workers = c.workers;
  r.bytes = static_cast<std::uint64_t>(per_run) * c.workers;
  for (std::size_t i = 0; i < c.repeats; i++) {
    const auto t0 = std::chrono::steady_clock::now();
    run_all(per_run);
    r.runs.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  auto sorted = r.runs;
  std::sort(sorted.begin(), sorted.end());
  r.seconds = sorted.size() % 2 ? sorted[sorted.size() / 2]
                                : 0.5 * (sorted[sorted.size() / 2 - 1] + sorted[sorted.size() / 2]);
  r.gbps = static_cast<double>(r.bytes) * 8.0 / r.seconds / 1e9;
  for (auto s : sums) r.checksum ^= s;
  return r;
}

struct SuiteConfig
{
  std::vector<seedgen::Algo> algos{ seedgen::Algo::mickey, seedgen::Algo::grain, seedgen::Algo::aes_ctr };
  std::vector<Impl> impls{ Impl::naive, Impl::sliced };
  MeasureConfig base;
};

struct SuiteResult
{
  std::vector<BenchResult> rows;
  std::vector<std::string> ranking; // sliced rows, fastest first

  const BenchResult* find(std::string_view algo, Impl impl) const noexcept
  {
    for (const auto& r : rows) {
      if (r.algorithm == algo && r.impl == impl) return &r;
    }
    return nullptr;
  }

  // Each stream cipher's sliced throughput exceeds sliced AES-CTR.
  bool stream_ciphers_ahead_of_aes() const noexcept
  {
    const auto* a = find("aes-ctr", Impl::sliced);
    const auto* m = find("mickey", Impl::sliced);
    const auto* g = find("grain", Impl::sliced);
    return a && m && g && m->gbps > a->gbps && g->gbps > a->gbps;
  }
};

inline SuiteResult
compare_suite(const SuiteConfig& cfg)
{
  SuiteResult out;
  for (auto algo : cfg.algos) {
    for (auto impl : cfg.impls) {
      MeasureConfig c = cfg.base;
      c.algo = algo;
      c.impl = impl;
      out.rows.push_back(measure(c));
    }
  }
  for (auto& r : out.rows) {
    if (const auto* n = out.find(r.algorithm, Impl::naive)) r.speedup = r.gbps / n->gbps;
  }
  std::vector<const BenchResult*> sliced;
  for (const auto& r : out.rows) {
    if (r.impl == Impl::sliced) sliced.push_back(&r);
  }
  std::sort(sliced.begin(), sliced.end(), [](auto* a, auto* b) { return a->gbps > b->gbps; });
  for (auto* r : sliced) out.ranking.push_back(r->algorithm);
  return out;
}

// Structured results file.
//
// {
//   "schema": "bsprng-bench/1",
//   "results": [ { "algorithm": "mickey", "impl": "sliced", "lanes": 64,
//                  "workers": 1, "bytes": 67108864, "seconds": 0.91,
//                  "runs": [...], "gbps": 0.59, "speedup": 11.2,
//                  "checksum": "0123456789abcdef" }, ... ],
//   "ranking": ["grain", "aes-ctr", "mickey"]
// }
inline nlohmann::json
to_json(const BenchResult& r)
{
  char sum[17];
  std::snprintf(sum, sizeof sum, "%016llx", static_cast<unsigned long long>(r.checksum));
  return { { "algorithm", r.algorithm }, { "impl", std::string(impl_name(r.impl)) },
           { "lanes", r.lanes },         { "workers", r.workers },
           { "bytes", r.bytes },         { "seconds", r.seconds },
           { "runs", r.runs },           { "gbps", r.gbps },
           { "speedup", r.speedup },     { "checksum", std::string(sum) } };
}

inline nlohmann::json
to_json(const SuiteResult& s)
{
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : s.rows) rows.push_back(to_json(r));
  return { { "schema", schema_id }, { "results", rows }, { "ranking", s.ranking } };
}

inline BenchResult
result_from_json(const nlohmann::json& j)
{
  BenchResult r;
  r.algorithm = j.at("algorithm").get<std::string>();
  r.impl = parse_impl(j.at("impl").get<std::string>());
  r.lanes = j.at("lanes").get<std::size_t>();
  r.workers = j.at("workers").get<std::size_t>();
  r.bytes = j.at("bytes").get<std::uint64_t>();
  r.seconds = j.at("seconds").get<double>();
  r.runs = j.at("runs").get<std::vector<double>>();
  r.gbps = j.at("gbps").get<double>();
  r.speedup = j.at("speedup").get<double>();
  r.checksum = std::stoull(j.at("checksum").get<std::string>(), nullptr, 16);
  if (r.bytes == 0 || r.seconds <= 0) throw ValidationError("bench record needs bytes > 0 and seconds > 0");
  return r;
}

inline SuiteResult
suite_from_json(const nlohmann::json& j)
{
  if (j.at("schema").get<std::string>() != schema_id) {
    throw ValidationError("unknown bench schema '" + j.at("schema").get<std::string>() + "'");
  }
  SuiteResult s;
  for (const auto& r : j.at("results")) s.rows.push_back(result_from_json(r));
  s.ranking = j.at("ranking").get<std::vector<std::string>>();
  return s;
}

inline bool
operator==(const BenchResult& a, const BenchResult& b)
{
  return a.algorithm == b.algorithm && a.impl == b.impl && a.lanes == b.lanes && a.workers == b.workers &&
         a.bytes == b.bytes && a.seconds == b.seconds && a.runs == b.runs && a.gbps == b.gbps &&
         a.speedup == b.speedup && a.checksum == b.checksum;
}

} // namespace bsprng::bench
