// CRC-8 over many equal-length messages at once, one message per lane.

#include <bsprng.hpp>

#include <cstdio>
#include <string>
#include <vector>

int
main()
{
  using namespace bsprng;

  std::vector<Bytes> msgs;
  for (int i = 0; i < 100; i++) {
    char s[16];
    const int n = std::snprintf(s, sizeof s, "message #%03d", i);
    msgs.emplace_back(s, s + n);
  }
  const CrcSpec spec{}; // poly 0x07, init 0
  const auto crcs = crc8_batch<std::uint64_t>(spec, msgs);

  std::size_t agree = 0;
  for (std::size_t i = 0; i < msgs.size(); i++) agree += crcs[i] == crc8_scalar(spec, msgs[i]);
  std::printf("first three: %02x %02x %02x\n", crcs[0], crcs[1], crcs[2]);
  std::printf("%zu/%zu match the bit-serial CRC\n", agree, msgs.size());

  const std::string check = "123456789";
  std::printf("check value: %02x\n", crc8_scalar(spec, Bytes(check.begin(), check.end())));
}
