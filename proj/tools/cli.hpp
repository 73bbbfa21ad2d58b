#pragma once

#include <bsprng.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

// bsprng command-line front end:
//
//   gen      emit keystream bytes (raw or hex)
//   vectors  check embedded and file known-answer vectors
//   test     NIST subset on files, stdin or generated streams
//   bench    naive vs bitsliced throughput
//   crc      bitsliced CRC-8 worked example
namespace bsprng::cli {

enum Exit : int
{
  ok = 0,
  runtime_error = 1,
  usage_error = 2,
  vector_mismatch = 3,
  stats_failure = 4,
};

struct Io
{
  std::ostream& out;
  std::ostream& err;
  std::istream& in;
  bool out_is_tty = false;
};

namespace detail {

inline Bytes
read_file(const std::string& path, std::istream& in)
{
  if (path == "-") return Bytes(std::istreambuf_iterator<char>(in), {});
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open '" + path + "'");
  return Bytes(std::istreambuf_iterator<char>(f), {});
}

inline Bytes
decode_hex_text(const Bytes& text)
{
  std::string s;
  for (auto c : text) {
    if (!std::isspace(c)) s.push_back(static_cast<char>(c));
  }
  return from_hex(s);
}

inline std::string
format_p(double p)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", p);
  return buf;
}

} // namespace detail

struct GenOptions
{
  std::string algo;
  std::string seed, key, iv, nonce, poly = "16";
  std::optional<std::size_t> bits, bytes;
  std::string format = "raw";
  std::string impl = "sliced";
  std::size_t lanes = 64;
  std::string interleave = "lane";
  std::string output;
  bool force = false;
};

inline StreamConfig
stream_config(const GenOptions& o)
{
  StreamConfig c;
  c.algo = seedgen::parse_algo(o.algo);
  c.impl = bench::parse_impl(o.impl);
  c.lanes = o.lanes;
  if (o.interleave == "lane") {
    c.interleave = Interleave::lane;
  } else if (o.interleave == "bit") {
    c.interleave = Interleave::bit;
  } else {
    throw ValidationError("--interleave must be lane or bit");
  }
  if (!o.seed.empty()) c.seed = seedgen::MasterSeed::from_hex(o.seed);
  if (!o.key.empty()) c.key = from_hex(o.key);
  if (c.algo == seedgen::Algo::aes_ctr) {
    if (!o.iv.empty()) throw ValidationError("aes-ctr takes --nonce, not --iv");
    if (!o.nonce.empty()) c.iv = from_hex(o.nonce);
  } else {
    if (!o.nonce.empty()) throw ValidationError("--nonce applies to aes-ctr only");
    if (!o.key.empty() || !o.iv.empty()) c.iv = from_hex(o.iv);
  }
  if (c.algo == seedgen::Algo::lfsr) {
    const bool bare_degree = std::all_of(o.poly.begin(), o.poly.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); });
    c.poly = bare_degree ? primitive_spec(std::stoul(o.poly)) : parse_feedback_spec(o.poly);
  }
  c.validate();
  return c;
}

inline int
run_gen(const GenOptions& o, Io& io)
{
  if (o.bits.has_value() == o.bytes.has_value()) throw ValidationError("give exactly one of --bits or --bytes");
  if (o.format != "raw" && o.format != "hex") throw ValidationError("--format must be raw or hex");
  const StreamConfig c = stream_config(o);
  const std::size_t nbits = o.bits ? *o.bits : *o.bytes * 8;
  Bytes data = generate(c, (nbits + 7) / 8);
  if (nbits % 8) data.back() &= static_cast<std::uint8_t>(0xff << (8 - nbits % 8));

  std::string format = o.format;
  if (format == "raw" && o.output.empty() && io.out_is_tty && !o.force) {
    io.err << "bsprng: refusing raw output to a terminal, writing hex (use --force for raw)\n";
    format = "hex";
  }
  std::ofstream file;
  std::ostream* out = &io.out;
  if (!o.output.empty()) {
    file.open(o.output, std::ios::binary);
    if (!file) throw ValidationError("cannot write '" + o.output + "'");
    out = &file;
  }
  if (format == "hex") {
    *out << to_hex(data) << '\n';
  } else {
    out->write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  }
  out->flush();
  return Exit::ok;
}

struct VectorsOptions
{
  std::vector<std::string> algos;
  std::vector<std::string> files;
};

inline int
run_vectors(const VectorsOptions& o, Io& io)
{
  std::vector<seedgen::Algo> algos;
  for (const auto& a : o.algos) algos.push_back(seedgen::parse_algo(a));
  if (algos.empty()) algos = { seedgen::Algo::mickey, seedgen::Algo::grain, seedgen::Algo::aes_ctr };
  if (!o.files.empty() && algos.size() != 1) throw ValidationError("vector files need exactly one --algo");

  std::vector<vectors::Vector> all;
  for (auto a : algos) {
    if (a == seedgen::Algo::lfsr) throw ValidationError("no known-answer vectors for lfsr");
    auto e = vectors::embedded(a);
    all.insert(all.end(), e.begin(), e.end());
  }
  for (const auto& f : o.files) {
    std::ifstream in(f);
    if (!in) throw ValidationError("cannot open '" + f + "'");
    auto v = vectors::parse(in, algos[0], f);
    all.insert(all.end(), v.begin(), v.end());
  }

  std::size_t bad = 0;
  for (const auto& v : all) {
    const auto r = vectors::verify(v);
    io.out << (r.ok() ? "ok    " : "FAIL  ") << std::left << std::setw(8) << seedgen::algo_name(v.algo)
           << " scalar=" << (r.scalar_ok ? "ok" : "mismatch") << " sliced32=" << (r.sliced32_ok ? "ok" : "mismatch")
           << " sliced64=" << (r.sliced64_ok ? "ok" : "mismatch") << "  " << v.source << '\n';
    if (!r.scalar_ok) io.out << "      expected " << v.keystream << "\n      got      " << r.scalar << '\n';
    bad += !r.ok();
  }
  io.out << all.size() - bad << "/" << all.size() << " vectors reproduced\n";
  return bad ? Exit::vector_mismatch : Exit::ok;
}

struct TestOptions
{
  std::vector<std::string> files;
  std::string input_format = "raw";
  std::string generate_algo;
  std::string seed;
  std::string impl = "sliced";
  std::size_t lanes = 64;
  std::size_t streams = 100;
  std::size_t bits_per_stream = 1000000;
  std::size_t workers = 1;
  std::string json;
  stats::SuiteParams params;
};

inline void
print_suite(const stats::SuiteReport& rep, std::ostream& out)
{
  out << "# streams " << rep.streams << " x " << rep.bits_per_stream << " bits, alpha " << rep.params.alpha
      << ", proportion interval [" << detail::format_p(rep.interval.lower) << ", "
      << detail::format_p(std::min(1.0, rep.interval.upper)) << "]\n";
  out << std::left << std::setw(34) << "Test" << std::setw(12) << "P-value" << std::setw(12) << "Proportion"
      << "Result\n";
  for (const auto& r : rep.rows) {
    out << std::left << std::setw(34) << r.test << std::setw(12) << detail::format_p(r.uniformity_p)
        << std::setw(12) << detail::format_p(r.proportion) << (r.ok() ? "Success" : "Failure") << '\n';
  }
  for (const auto& d : stats::delegated_tests()) {
    out << std::left << std::setw(34) << d << "delegated: run official NIST sts\n";
  }
}

inline nlohmann::json
suite_json(const stats::SuiteReport& rep, const std::string& seed)
{
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : rep.rows) {
    rows.push_back({ { "test", r.test },
                     { "uniformity_p", r.uniformity_p },
                     { "proportion", r.proportion },
                     { "passed", r.passed },
                     { "result", r.ok() ? "Success" : "Failure" },
                     { "p_values", r.p_values } });
  }
  return { { "streams", rep.streams },
           { "bits_per_stream", rep.bits_per_stream },
           { "alpha", rep.params.alpha },
           { "seed", seed },
           { "proportion_interval", { rep.interval.lower, rep.interval.upper } },
           { "rows", rows },
           { "delegated", stats::delegated_tests() },
           { "passed", rep.passed() } };
}

// Stream i of a generated suite: lane i % L of the generator seeded with
// child seed i / L.
inline Bits
generated_stream(const StreamConfig& base, std::size_t index, std::size_t nbits)
{
  StreamConfig c = base;
  c.seed = seedgen::child_seed(*base.seed, static_cast<std::uint32_t>(index / base.lanes));
  const std::size_t nbytes = (nbits + 7) / 8;
  const auto lanes = lane_streams(c, nbytes);
  return unpack_bits(lanes[index % base.lanes], nbits, lane_bit_order(c.algo));
}

inline stats::SuiteReport
run_generated_suite(const StreamConfig& base, std::size_t streams, std::size_t nbits,
                    const stats::SuiteParams& params, std::size_t workers)
{
  stats::SuiteAccumulator acc(params);
  std::mutex mu;
  const std::size_t L = base.lanes;
  const std::size_t batches = (streams + L - 1) / L;
  auto work = [&](std::size_t first_batch) {
    for (std::size_t b = first_batch; b < batches; b += workers) {
      StreamConfig c = base;
      c.seed = seedgen::child_seed(*base.seed, static_cast<std::uint32_t>(b));
      const auto lanes = lane_streams(c, (nbits + 7) / 8);
      for (std::size_t j = 0; j < L && b * L + j < streams; j++) {
        const Bits bits = unpack_bits(lanes[j], nbits, lane_bit_order(c.algo));
        auto reports = stats::run_all(bits, params);
        std::lock_guard<std::mutex> g(mu);
        acc.add(b * L + j, bits.size(), reports);
      }
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> t;
    for (std::size_t w = 0; w < workers; w++) t.emplace_back(work, w);
    for (auto& th : t) th.join();
  }
  return acc.finish();
}

inline int
run_test(const TestOptions& o, Io& io)
{
  if (o.workers == 0) throw ValidationError("--workers must be at least 1");
  stats::SuiteReport rep;
  std::string seed_echo;
  if (!o.generate_algo.empty()) {
    if (!o.files.empty()) throw ValidationError("give input files or --generate, not both");
    if (o.seed.empty()) throw ValidationError("--generate needs --seed");
    GenOptions g;
    g.algo = o.generate_algo;
    g.seed = o.seed;
    g.impl = o.impl;
    g.lanes = o.lanes;
    const StreamConfig c = stream_config(g);
    seed_echo = c.seed->hex();
    io.out << "# generated " << seedgen::algo_name(c.algo) << " (" << o.impl << ", " << o.lanes
           << " lanes), seed " << seed_echo << '\n';
    rep = run_generated_suite(c, o.streams, o.bits_per_stream, o.params, o.workers);
  } else {
    if (o.files.empty()) throw ValidationError("give input files (or - for stdin) or --generate");
    if (o.input_format != "raw" && o.input_format != "hex") throw ValidationError("--input-format must be raw or hex");
    stats::SuiteAccumulator acc(o.params);
    std::size_t index = 0;
    for (const auto& f : o.files) {
      Bytes data = detail::read_file(f, io.in);
      if (o.input_format == "hex") data = detail::decode_hex_text(data);
      const Bits bits = unpack_bits(data, BitOrder::msb_first);
      for (std::size_t off = 0; off + o.bits_per_stream <= bits.size(); off += o.bits_per_stream) {
        acc.add_stream(index++, std::span<const std::uint8_t>(bits).subspan(off, o.bits_per_stream));
      }
    }
    io.out << "# " << index << " streams read from input\n";
    rep = acc.finish();
  }
  print_suite(rep, io.out);
  if (!o.json.empty()) {
    std::ofstream j(o.json);
    if (!j) throw ValidationError("cannot write '" + o.json + "'");
    j << suite_json(rep, seed_echo).dump(2) << '\n';
  }
  return rep.passed() ? Exit::ok : Exit::stats_failure;
}

struct BenchOptions
{
  std::vector<std::string> algos;
  std::vector<std::string> impls;
  std::size_t lanes = 64;
  std::size_t bytes = std::size_t{ 64 } << 20;
  std::size_t repeats = 5;
  std::size_t warmup = 1;
  std::vector<std::size_t> buffer_bytes{ std::size_t{ 64 } << 10 };
  std::size_t workers = 1;
  std::string seed;
  std::string json;
};

inline void
print_bench(const bench::SuiteResult& s, std::ostream& out)
{
  out << std::left << std::setw(10) << "algorithm" << std::setw(8) << "impl" << std::setw(7) << "lanes"
      << std::setw(9) << "workers" << std::setw(12) << "MiB" << std::setw(12) << "median s" << std::setw(12)
      << "Gbit/s" << "speedup\n";
  for (const auto& r : s.rows) {
    char line[160];
    std::snprintf(line, sizeof line, "%-10s%-8s%-7zu%-9zu%-12.1f%-12.4f%-12.4f%.2f\n", r.algorithm.c_str(),
                  std::string(bench::impl_name(r.impl)).c_str(), r.lanes, r.workers,
                  static_cast<double>(r.bytes) / (1 << 20), r.seconds, r.gbps, r.speedup);
    out << line;
  }
  out << "ranking (bitsliced):";
  for (const auto& a : s.ranking) out << ' ' << a;
  out << '\n';
}

inline int
run_bench(const BenchOptions& o, Io& io)
{
  bench::SuiteConfig cfg;
  if (!o.algos.empty()) {
    cfg.algos.clear();
    for (const auto& a : o.algos) cfg.algos.push_back(seedgen::parse_algo(a));
  }
  if (!o.impls.empty()) {
    cfg.impls.clear();
    for (const auto& i : o.impls) cfg.impls.push_back(bench::parse_impl(i));
  }
  cfg.base.lanes = o.lanes;
  cfg.base.nbytes = o.bytes;
  cfg.base.repeats = o.repeats;
  cfg.base.warmup = o.warmup;
  cfg.base.workers = o.workers;
  if (!o.seed.empty()) cfg.base.seed = seedgen::MasterSeed::from_hex(o.seed);
  io.out << "# seed " << cfg.base.seed.hex() << '\n';

  nlohmann::json runs = nlohmann::json::array();
  for (auto buf : o.buffer_bytes) {
    cfg.base.buffer_bytes = buf;
    io.out << "# buffer " << buf << " bytes\n";
    const auto s = bench::compare_suite(cfg);
    print_bench(s, io.out);
    const auto* m = s.find("mickey", Impl::sliced);
    const auto* g = s.find("grain", Impl::sliced);
    const auto* a = s.find("aes-ctr", Impl::sliced);
    if (m && g && a) {
      io.out << "stream ciphers ahead of AES-CTR (bitsliced): mickey " << (m->gbps > a->gbps ? "yes" : "no")
             << ", grain " << (g->gbps > a->gbps ? "yes" : "no") << '\n';
    }
    auto j = bench::to_json(s);
    j["buffer_bytes"] = buf;
    j["seed"] = cfg.base.seed.hex();
    runs.push_back(j);
  }
  if (!o.json.empty()) {
    std::ofstream f(o.json);
    if (!f) throw ValidationError("cannot write '" + o.json + "'");
    f << (runs.size() == 1 ? runs[0] : runs).dump(2) << '\n';
  }
  return Exit::ok;
}

struct CrcOptions
{
  std::string message = "123456789";
  std::string poly = "0x07";
  std::size_t lanes = 32;
};

inline int
run_crc(const CrcOptions& o, Io& io)
{
  CrcSpec spec;
  const unsigned long p = std::stoul(o.poly, nullptr, 0);
  if (p == 0 || p > 0xff) throw ValidationError("--poly must be an 8-bit nonzero value");
  spec.polynomial = static_cast<std::uint8_t>(p);
  if (o.lanes != 32 && o.lanes != 64) throw ValidationError("lane width must be 32 or 64");

  // Lane j carries the message with its last byte offset by j.
  std::vector<std::vector<std::uint8_t>> msgs(o.lanes, std::vector<std::uint8_t>(o.message.begin(), o.message.end()));
  if (o.message.empty()) throw ValidationError("--message must not be empty");
  for (std::size_t j = 0; j < o.lanes; j++) msgs[j].back() = static_cast<std::uint8_t>(msgs[j].back() + j);
  const auto sliced = o.lanes == 32 ? crc8_sliced<std::uint32_t>(spec, msgs) : crc8_sliced<std::uint64_t>(spec, msgs);

  char hdr[64];
  std::snprintf(hdr, sizeof hdr, "CRC-8 poly 0x%02x init 0x%02x, %zu lanes\n", spec.polynomial, spec.init, o.lanes);
  io.out << hdr;
  std::size_t bad = 0;
  for (std::size_t j = 0; j < o.lanes; j++) {
    const auto scalar = crc8_scalar(spec, msgs[j]);
    char line[96];
    std::snprintf(line, sizeof line, "lane %2zu  %-20s scalar 0x%02x  sliced 0x%02x\n", j,
                  std::string(msgs[j].begin(), msgs[j].end()).c_str(), scalar, sliced[j]);
    io.out << line;
    bad += scalar != sliced[j];
  }
  io.out << (bad ? "MISMATCH\n" : "all lanes match\n");
  return bad ? Exit::vector_mismatch : Exit::ok;
}

// Entry point; args excludes the program name.
inline int
run(const std::vector<std::string>& args, Io io)
{
  CLI::App app{ "Bitsliced pseudo-random generators: MICKEY 2.0, Grain v1, AES-128 CTR, LFSR" };
  app.name("bsprng");
  app.require_subcommand(1, 1);

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "Emit keystream bytes");
  g->add_option("--algo", gen.algo, "mickey | grain | aes-ctr | lfsr")->required();
  g->add_option("--seed", gen.seed, "256-bit master seed (hex); lanes use derived material");
  g->add_option("--key", gen.key, "explicit key (hex), single stream");
  g->add_option("--iv", gen.iv, "explicit IV (hex) for mickey/grain");
  g->add_option("--nonce", gen.nonce, "explicit 12-byte nonce (hex) for aes-ctr");
  g->add_option("--poly", gen.poly, "LFSR feedback: degree 4/8/16/24 or taps '{0,3};n=4' or 'x^4+x^3+1'");
  auto* bits_opt = g->add_option("--bits", gen.bits, "output length in bits");
  auto* bytes_opt = g->add_option("--bytes", gen.bytes, "output length in bytes");
  bits_opt->excludes(bytes_opt);
  g->add_option("--format", gen.format, "raw | hex")->check(CLI::IsMember({ "raw", "hex" }));
  g->add_option("--impl", gen.impl, "naive | sliced")->check(CLI::IsMember({ "naive", "sliced" }));
  g->add_option("--lanes", gen.lanes, "lane width 32 | 64")->check(CLI::IsMember({ 32, 64 }));
  g->add_option("--interleave", gen.interleave, "lane | bit")->check(CLI::IsMember({ "lane", "bit" }));
  g->add_option("-o,--output", gen.output, "write to file instead of stdout");
  g->add_flag("--force", gen.force, "allow raw output to a terminal");

  VectorsOptions vec;
  auto* v = app.add_subcommand("vectors", "Verify known-answer vectors");
  v->add_option("--algo", vec.algos, "mickey | grain | aes-ctr (default: all)");
  v->add_option("--file", vec.files, "extra vector file(s)")->check(CLI::ExistingFile);

  TestOptions test;
  auto* t = app.add_subcommand("test", "Run the NIST SP 800-22 subset");
  t->add_option("files", test.files, "input files, - for stdin");
  t->add_option("--input-format", test.input_format, "raw | hex")->check(CLI::IsMember({ "raw", "hex" }));
  t->add_option("--generate", test.generate_algo, "generate streams with this algorithm");
  t->add_option("--seed", test.seed, "master seed for --generate");
  t->add_option("--impl", test.impl, "naive | sliced")->check(CLI::IsMember({ "naive", "sliced" }));
  t->add_option("--lanes", test.lanes, "lane width 32 | 64")->check(CLI::IsMember({ 32, 64 }));
  t->add_option("--streams", test.streams, "number of generated streams")->check(CLI::PositiveNumber);
  t->add_option("--bits-per-stream", test.bits_per_stream, "stream length in bits")->check(CLI::PositiveNumber);
  t->add_option("--alpha", test.params.alpha, "significance level")->check(CLI::Range(0.0, 1.0));
  t->add_option("--block-len", test.params.block_frequency_len, "block frequency M");
  t->add_option("--serial-m", test.params.serial_m, "serial test m");
  t->add_option("--apen-m", test.params.apen_m, "approximate entropy m");
  t->add_option("--lc-block", test.params.linear_complexity_len, "linear complexity M");
  t->add_option("--workers", test.workers, "worker threads");
  t->add_option("--json", test.json, "write structured results");

  BenchOptions bo;
  auto* b = app.add_subcommand("bench", "Naive vs bitsliced throughput");
  b->add_option("--algo", bo.algos, "mickey | grain | aes-ctr (default: all)");
  b->add_option("--impl", bo.impls, "naive | sliced (default: both)");
  b->add_option("--lanes", bo.lanes, "lane width 32 | 64")->check(CLI::IsMember({ 32, 64 }));
  b->add_option("--bytes", bo.bytes, "bytes per timed run (>= 1 MiB)");
  b->add_option("--repeats", bo.repeats, "timed runs (>= 3); the median is reported");
  b->add_option("--warmup", bo.warmup, "warm-up runs");
  b->add_option("--buffer-bytes", bo.buffer_bytes, "output buffer size(s); several values sweep");
  b->add_option("--workers", bo.workers, "independent generators run concurrently");
  b->add_option("--seed", bo.seed, "master seed");
  b->add_option("--json", bo.json, "write structured results");

  CrcOptions co;
  auto* c = app.add_subcommand("crc", "Bitsliced CRC-8 worked example");
  c->add_option("--message", co.message, "message (lane j adds j to the last byte)");
  c->add_option("--poly", co.poly, "CRC polynomial, e.g. 0x07");
  c->add_option("--lanes", co.lanes, "lane width 32 | 64")->check(CLI::IsMember({ 32, 64 }));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    io.out << app.help();
    return Exit::ok;
  } catch (const CLI::CallForAllHelp&) {
    io.out << app.help("", CLI::AppFormatMode::All);
    return Exit::ok;
  } catch (const CLI::ParseError& e) {
    io.err << "bsprng: " << e.what() << "\n" << app.help();
    return Exit::usage_error;
  }

  try {
    if (g->parsed()) return run_gen(gen, io);
    if (v->parsed()) return run_vectors(vec, io);
    if (t->parsed()) return run_test(test, io);
    if (b->parsed()) return run_bench(bo, io);
    if (c->parsed()) return run_crc(co, io);
  } catch (const InsufficientData& e) {
    io.err << "bsprng: " << e.what() << '\n';
    return Exit::usage_error;
  } catch (const ValidationError& e) {
    io.err << "bsprng: " << e.what() << '\n';
    return Exit::usage_error;
  } catch (const StructuralError& e) {
    io.err << "bsprng: " << e.what() << '\n';
    return Exit::usage_error;
  } catch (const std::invalid_argument& e) {
    io.err << "bsprng: invalid number: " << e.what() << '\n';
    return Exit::usage_error;
  } catch (const std::exception& e) {
    io.err << "bsprng: " << e.what() << '\n';
    return Exit::runtime_error;
  }
  return Exit::usage_error;
}

} // namespace bsprng::cli
