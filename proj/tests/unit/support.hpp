#pragma once

// Test helpers and independent reference models. The models share no code
// with the library: they are literal bit-array transcriptions.

#include <bsprng.hpp>

#include <array>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

namespace testsupport {

using bsprng::Bits;
using bsprng::Bytes;

inline std::string
data_path(const std::string& name)
{
  return std::string(BSPRNG_TEST_DATA) + "/" + name;
}

inline Bytes
read_data(const std::string& name)
{
  std::ifstream f(data_path(name), std::ios::binary);
  if (!f) throw std::runtime_error("missing test data " + name);
  return Bytes(std::istreambuf_iterator<char>(f), {});
}

// First 10^6 binary digits of e (leading "10" included).
inline const Bits&
e_bits()
{
  static const Bits bits = bsprng::unpack_bits(read_data("e_1m.bin"), 1000000, bsprng::BitOrder::msb_first);
  return bits;
}

inline Bytes
random_bytes(std::mt19937_64& rng, std::size_t n)
{
  Bytes b(n);
  for (auto& v : b) v = static_cast<std::uint8_t>(rng());
  return b;
}

inline Bits
random_bits(std::mt19937_64& rng, std::size_t n)
{
  Bits b(n);
  for (auto& v : b) v = static_cast<std::uint8_t>(rng() & 1u);
  return b;
}

namespace oracle {

// MICKEY 2.0 on plain bit arrays.
class Mickey
{
public:
  Mickey(const Bytes& key, const Bytes& iv, std::size_t iv_bits)
  {
    r_.fill(0);
    s_.fill(0);
    for (std::size_t i = 0; i < iv_bits; i++) clock_kg(true, bit(iv, i));
    for (std::size_t i = 0; i < 80; i++) clock_kg(true, bit(key, i));
    for (int i = 0; i < 100; i++) clock_kg(true, 0);
  }

  Bytes keystream(std::size_t nbytes)
  {
    Bytes out(nbytes);
    for (auto& byte : out) {
      for (int j = 0; j < 8; j++) {
        byte = static_cast<std::uint8_t>((byte << 1) | (r_[0] ^ s_[0]));
        clock_kg(false, 0);
      }
    }
    return out;
  }

private:
  using Reg = std::array<std::uint8_t, 100>;

  static int bit(const Bytes& b, std::size_t i) { return (b[i / 8] >> (7 - i % 8)) & 1; }

  static Reg table(std::array<std::uint32_t, 4> w)
  {
    Reg t{};
    for (int i = 0; i < 100; i++) t[i] = (w[i / 32] >> (i % 32)) & 1u;
    return t;
  }

  void clock_r(int input, int control)
  {
    static const Reg rtaps = table({ 0x1279327b, 0xb5546660, 0xdf87818f, 0x3 });
    const int fb = r_[99] ^ input;
    Reg n{};
    for (int i = 1; i < 100; i++) n[i] = r_[i - 1];
    if (fb) {
      for (int i = 0; i < 100; i++) n[i] ^= rtaps[i];
    }
    if (control) {
      for (int i = 0; i < 100; i++) n[i] ^= r_[i];
    }
    r_ = n;
  }

  void clock_s(int input, int control)
  {
    static const Reg c0 = table({ 0x6aa97a30, 0x7942a809, 0x057ebfea, 0x6 });
    static const Reg c1 = table({ 0xdd629e9a, 0xe3a21d63, 0x91c23dd7, 0x1 });
    static const Reg f0 = table({ 0x9ffa7faf, 0xaf4a9381, 0x9cec5802, 0x1 });
    static const Reg f1 = table({ 0x4c8cb877, 0x4911b063, 0x40fbc52b, 0x8 });
    const int fb = s_[99] ^ input;
    Reg h{};
    for (int i = 1; i < 99; i++) h[i] = s_[i - 1] ^ ((s_[i] ^ c0[i]) & (s_[i + 1] ^ c1[i]));
    h[99] = s_[98];
    if (fb) {
      const Reg& f = control ? f1 : f0;
      for (int i = 0; i < 100; i++) h[i] ^= f[i];
    }
    s_ = h;
  }

  void clock_kg(bool mixing, int input)
  {
    const int cr = s_[34] ^ r_[67];
    const int cs = s_[67] ^ r_[33];
    const int ir = input ^ (mixing ? s_[50] : 0);
    clock_r(ir, cr);
    clock_s(input, cs);
  }

  Reg r_, s_;
};

// Grain v1 with the filter written as its algebraic normal form.
inline Bytes
grain(const Bytes& key, const Bytes& iv, std::size_t nbytes)
{
  std::vector<int> b(80), s(80);
  for (int i = 0; i < 80; i++) b[i] = (key[i / 8] >> (i % 8)) & 1;
  for (int i = 0; i < 64; i++) s[i] = (iv[i / 8] >> (i % 8)) & 1;
  for (int i = 64; i < 80; i++) s[i] = 1;
  auto clk = [&](bool init) {
    const int x0 = s[3], x1 = s[25], x2 = s[46], x3 = s[64], x4 = b[63];
    const int h = x1 ^ x4 ^ (x0 & x3) ^ (x2 & x3) ^ (x3 & x4) ^ (x0 & x1 & x2) ^ (x0 & x2 & x3) ^
                  (x0 & x2 & x4) ^ (x1 & x2 & x4) ^ (x2 & x3 & x4);
    int z = h;
    for (int a : { 1, 2, 4, 10, 31, 43, 56 }) z ^= b[a];
    int ls = s[62] ^ s[51] ^ s[38] ^ s[23] ^ s[13] ^ s[0];
    const int g = b[62] ^ b[60] ^ b[52] ^ b[45] ^ b[37] ^ b[33] ^ b[28] ^ b[21] ^ b[14] ^ b[9] ^ b[0] ^
                  (b[63] & b[60]) ^ (b[37] & b[33]) ^ (b[15] & b[9]) ^ (b[60] & b[52] & b[45]) ^
                  (b[33] & b[28] & b[21]) ^ (b[63] & b[45] & b[28] & b[9]) ^
                  (b[60] & b[52] & b[37] & b[33]) ^ (b[63] & b[60] & b[21] & b[15]) ^
                  (b[63] & b[60] & b[52] & b[45] & b[37]) ^ (b[33] & b[28] & b[21] & b[15] & b[9]) ^
                  (b[52] & b[45] & b[37] & b[33] & b[28] & b[21]);
    int nb = s[0] ^ g;
    if (init) {
      ls ^= z;
      nb ^= z;
    }
    s.erase(s.begin());
    s.push_back(ls);
    b.erase(b.begin());
    b.push_back(nb);
    return z;
  };
  for (int i = 0; i < 160; i++) clk(true);
  Bytes out(nbytes);
  for (auto& v : out) {
    for (int j = 0; j < 8; j++) v = static_cast<std::uint8_t>(v | (clk(false) << j));
  }
  return out;
}

// GF(2^8) multiply modulo x^8 + x^4 + x^3 + x + 1.
constexpr std::uint8_t
gmul(std::uint8_t a, std::uint8_t b)
{
  std::uint8_t p = 0;
  while (b) {
    if (b & 1) p ^= a;
    a = static_cast<std::uint8_t>((a << 1) ^ ((a & 0x80) ? 0x1b : 0));
    b >>= 1;
  }
  return p;
}

// S-box from its definition: inversion in GF(2^8) then the affine map.
inline std::uint8_t
sbox(std::uint8_t a)
{
  std::uint8_t x = 0;
  if (a) {
    for (int c = 1; c < 256; c++) {
      if (gmul(a, static_cast<std::uint8_t>(c)) == 1) x = static_cast<std::uint8_t>(c);
    }
  }
  std::uint8_t r = 0x63;
  for (int i = 0; i < 5; i++) r ^= static_cast<std::uint8_t>((x << i) | (x >> (8 - i)));
  return r;
}

// Byte-at-a-time table CRC-8, non-reflected.
inline std::uint8_t
crc8_table(std::uint8_t poly, std::uint8_t init, const Bytes& msg)
{
  std::array<std::uint8_t, 256> t{};
  for (int v = 0; v < 256; v++) {
    std::uint8_t c = static_cast<std::uint8_t>(v);
    for (int k = 0; k < 8; k++) c = static_cast<std::uint8_t>((c & 0x80) ? (c << 1) ^ poly : c << 1);
    t[v] = c;
  }
  std::uint8_t crc = init;
  for (auto b : msg) crc = t[crc ^ b];
  return crc;
}

// Output of an LFSR with characteristic polynomial x^n + sum_{i in taps} x^i,
// from the linear recurrence s_{t+n} = sum_{i in taps} s_{t+i}.
inline Bits
lfsr_recurrence(std::size_t n, const std::vector<std::size_t>& taps, const Bits& initial, std::size_t count)
{
  Bits s = initial;
  while (s.size() < count) {
    const std::size_t t = s.size() - n;
    std::uint8_t v = 0;
    for (auto i : taps) v ^= s[t + i];
    s.push_back(v);
  }
  s.resize(count);
  return s;
}

// Multiplicative order of x modulo x^n + sum x^taps (0 if it exceeds 2^n).
inline std::uint64_t
poly_order(std::size_t n, const std::vector<std::size_t>& taps)
{
  std::uint64_t p = std::uint64_t{ 1 } << n;
  for (auto t : taps) p |= std::uint64_t{ 1 } << t;
  auto mulx = [&](std::uint64_t a) {
    a <<= 1;
    if ((a >> n) & 1u) a ^= p;
    return a;
  };
  std::uint64_t a = mulx(1), t = 1;
  while (a != 1) {
    a = mulx(a);
    if (++t > (std::uint64_t{ 1 } << n)) return 0;
  }
  return t;
}

} // namespace oracle
} // namespace testsupport
