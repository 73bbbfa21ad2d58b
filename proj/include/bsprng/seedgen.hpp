#pragma once

#include <bsprng/aes.hpp>
#include <bsprng/aes_ctr.hpp>
#include <bsprng/bits.hpp>
#include <bsprng/error.hpp>
#include <bsprng/grain.hpp>
#include <bsprng/lfsr.hpp>
#include <bsprng/mickey.hpp>

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

// Per-lane key/IV derivation from one 256-bit master seed.
//
//   K    = AES_{seed[0..16)}(seed[16..32)) xor seed[16..32)
//   blk  = AES_K(tag || 0^9 || lane || lanes || counter_be32)   (16 bytes)
//   lane material = blk(counter 0) || blk(counter 1) || ... truncated
//
// At most 64 lanes are derived per seed, far below the 2^40 IVs per key
// allowed for MICKEY 2.0.
namespace bsprng::seedgen {

inline constexpr std::size_t seed_bytes = 32;
inline constexpr std::size_t max_lanes = 64;

enum class Algo : std::uint8_t
{
  mickey = 1,
  grain = 2,
  aes_ctr = 3,
  lfsr = 4,
};

inline std::string_view
algo_name(Algo a) noexcept
{
  switch (a) {
    case Algo::mickey: return "mickey";
    case Algo::grain: return "grain";
    case Algo::aes_ctr: return "aes-ctr";
    case Algo::lfsr: return "lfsr";
  }
  return "?";
}

inline Algo
parse_algo(std::string_view s)
{
  if (s == "mickey") return Algo::mickey;
  if (s == "grain") return Algo::grain;
  if (s == "aes-ctr" || s == "aes") return Algo::aes_ctr;
  if (s == "lfsr") return Algo::lfsr;
  throw ValidationError("unknown algorithm '" + std::string(s) + "' (mickey, grain, aes-ctr, lfsr)");
}

class MasterSeed
{
public:
  explicit MasterSeed(std::span<const std::uint8_t> bytes)
  {
    if (bytes.size() != seed_bytes) {
      throw ValidationError("master seed must be 256 bits, got " + std::to_string(bytes.size() * 8));
    }
    if (std::all_of(bytes.begin(), bytes.end(), [](std::uint8_t b) { return b == 0; })) {
      throw ValidationError("master seed must not be all zero");
    }
    std::copy(bytes.begin(), bytes.end(), bytes_.begin());
  }

  static MasterSeed from_hex(std::string_view hex) { return MasterSeed(bsprng::from_hex(hex)); }

  const std::array<std::uint8_t, seed_bytes>& bytes() const noexcept { return bytes_; }
  std::string hex() const { return to_hex(bytes_); }

private:
  std::array<std::uint8_t, seed_bytes> bytes_{};
};

namespace detail {

inline aes::KeySchedule
derivation_key(const MasterSeed& seed)
{
  const auto& s = seed.bytes();
  aes::Key k0{};
  aes::Block x{};
  std::copy_n(s.begin(), 16, k0.begin());
  std::copy_n(s.begin() + 16, 16, x.begin());
  aes::Block k = aes::encrypt_block(aes::key_expand(k0), x);
  for (std::size_t i = 0; i < 16; i++) k[i] ^= x[i];
  return aes::key_expand(k);
}

inline void
check_lane(std::size_t lane, std::size_t lanes)
{
  if (lanes == 0 || lanes > max_lanes) {
    throw RangeError("lane count must be in [1, " + std::to_string(max_lanes) + "], got " + std::to_string(lanes));
  }
  if (lane >= lanes) {
    throw IndexError("lane " + std::to_string(lane) + " out of range for " + std::to_string(lanes) + " lanes");
  }
}

} // namespace detail

// Raw expansion: `nbytes` of lane material for (seed, algo, lane, lanes).
inline Bytes
expand(const MasterSeed& seed, Algo algo, std::size_t lane, std::size_t lanes, std::size_t nbytes)
{
  detail::check_lane(lane, lanes);
  const aes::KeySchedule ks = detail::derivation_key(seed);
  Bytes out;
  out.reserve(nbytes + 16);
  for (std::uint32_t ctr = 0; out.size() < nbytes; ctr++) {
    aes::Block in{};
    in[0] = static_cast<std::uint8_t>(algo);
    in[10] = static_cast<std::uint8_t>(lane);
    in[11] = static_cast<std::uint8_t>(lanes);
    in[12] = static_cast<std::uint8_t>(ctr >> 24);
    in[13] = static_cast<std::uint8_t>(ctr >> 16);
    in[14] = static_cast<std::uint8_t>(ctr >> 8);
    in[15] = static_cast<std::uint8_t>(ctr);
    const aes::Block c = aes::encrypt_block(ks, in);
    out.insert(out.end(), c.begin(), c.end());
  }
  out.resize(nbytes);
  return out;
}

// Independent master seed number `index` under `seed` (index 0 is the seed
// itself); used when more than 64 lanes are needed.
inline MasterSeed
child_seed(const MasterSeed& seed, std::uint32_t index)
{
  if (index == 0) return seed;
  const aes::KeySchedule ks = detail::derivation_key(seed);
  Bytes out;
  for (std::uint8_t half = 0; half < 2; half++) {
    aes::Block in{};
    in[0] = 0xff;
    in[1] = half;
    in[12] = static_cast<std::uint8_t>(index >> 24);
    in[13] = static_cast<std::uint8_t>(index >> 16);
    in[14] = static_cast<std::uint8_t>(index >> 8);
    in[15] = static_cast<std::uint8_t>(index);
    const aes::Block c = aes::encrypt_block(ks, in);
    out.insert(out.end(), c.begin(), c.end());
  }
  if (std::all_of(out.begin(), out.end(), [](std::uint8_t b) { return b == 0; })) out[0] = 1;
  return MasterSeed(out);
}

// Key and IV sizes per algorithm.
struct MaterialSize
{
  std::size_t key_bytes;
  std::size_t iv_bytes;
};

inline MaterialSize
material_size(Algo algo, std::size_t lfsr_degree = 0)
{
  switch (algo) {
    case Algo::mickey: return { mickey::key_bits / 8, mickey::max_iv_bits / 8 };
    case Algo::grain: return { grain::key_bytes, grain::iv_bytes };
    case Algo::aes_ctr: return { aes::key_bytes, aes::nonce_bytes };
    case Algo::lfsr: return { 0, (lfsr_degree + 7) / 8 };
  }
  return { 0, 0 };
}

struct LaneMaterial
{
  Bytes key;
  Bytes iv;
};

inline LaneMaterial
derive_lane_material(const MasterSeed& seed, std::size_t lane, Algo algo, std::size_t lanes = max_lanes,
                     std::size_t lfsr_degree = 0)
{
  const MaterialSize sz = material_size(algo, lfsr_degree);
  if (algo == Algo::lfsr && lfsr_degree == 0) throw ValidationError("LFSR material needs a degree");
  const Bytes raw = expand(seed, algo, lane, lanes, sz.key_bytes + sz.iv_bytes);
  return { Bytes(raw.begin(), raw.begin() + static_cast<std::ptrdiff_t>(sz.key_bytes)),
           Bytes(raw.begin() + static_cast<std::ptrdiff_t>(sz.key_bytes), raw.end()) };
}

inline mickey::KeyIv
mickey_lane(const MasterSeed& seed, std::size_t lane, std::size_t lanes = max_lanes)
{
  auto m = derive_lane_material(seed, lane, Algo::mickey, lanes);
  return mickey::KeyIv::make(std::move(m.key), std::move(m.iv), std::nullopt);
}

inline grain::KeyIv
grain_lane(const MasterSeed& seed, std::size_t lane, std::size_t lanes = max_lanes)
{
  auto m = derive_lane_material(seed, lane, Algo::grain, lanes);
  return grain::KeyIv::make(std::move(m.key), std::move(m.iv));
}

struct AesLane
{
  aes::Key key;
  aes::Nonce nonce;
};

inline AesLane
aes_lane(const MasterSeed& seed, std::size_t lane, std::size_t lanes = max_lanes)
{
  auto m = derive_lane_material(seed, lane, Algo::aes_ctr, lanes);
  return { aes::make_key(m.key), aes::make_nonce(m.iv) };
}

// Initial LFSR state (n bits); an all-zero draw is replaced by state 1.
inline Bits
lfsr_lane(const MasterSeed& seed, std::size_t lane, std::size_t degree, std::size_t lanes = max_lanes)
{
  auto m = derive_lane_material(seed, lane, Algo::lfsr, lanes, degree);
  Bits state = unpack_bits(m.iv, degree, BitOrder::lsb_first);
  if (std::none_of(state.begin(), state.end(), [](std::uint8_t b) { return b != 0; })) state[0] = 1;
  return state;
}

} // namespace bsprng::seedgen
