// Run the statistical battery on ten Grain lanes of 10^5 bits each.

#include <bsprng.hpp>

#include <cstdio>

int
main()
{
  using namespace bsprng;

  StreamConfig c;
  c.algo = seedgen::Algo::grain;
  c.lanes = 32;
  c.seed = seedgen::MasterSeed::from_hex("8f3a5bc0d4e1f2a3b4c5d6e7f8091a2b3c4d5e6f708192a3b4c5d6e7f8091a2b");

  const std::size_t nbits = 100000;
  const auto lanes = lane_streams(c, nbits / 8);
  std::vector<stats::BitStream> streams;
  for (std::size_t j = 0; j < 10; j++) streams.push_back(stats::BitStream::from_bytes(lanes[j], lane_bit_order(c.algo)));

  const auto rep = stats::run_suite(streams);
  for (const auto& r : rep.rows) {
    std::printf("%-32s uniformity %.4f  proportion %.2f  %s\n", r.test.c_str(), r.uniformity_p, r.proportion,
                r.ok() ? "ok" : "FAIL");
  }
  std::printf("overall: %s\n", rep.passed() ? "pass" : "fail");
}
