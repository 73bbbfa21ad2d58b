// Derive 64 MICKEY lanes from one master seed and print the first bytes of a few.

#include <bsprng.hpp>

#include <cstdio>

int
main()
{
  using namespace bsprng;

  StreamConfig c;
  c.algo = seedgen::Algo::mickey;
  c.lanes = 64;
  c.seed = seedgen::MasterSeed::from_hex("000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f");

  const auto lanes = lane_streams(c, 16);
  for (std::size_t j : { 0u, 1u, 63u }) std::printf("lane %2zu  %s\n", j, to_hex(lanes[j]).c_str());

  // The naive engine produces the same bytes, one lane at a time.
  c.impl = Impl::naive;
  std::printf("naive agrees: %s\n", lane_streams(c, 16) == lanes ? "yes" : "no");
}
