#pragma once

#include <bsprng/aes_ctr.hpp>
#include <bsprng/bits.hpp>
#include <bsprng/bitslab.hpp>
#include <bsprng/error.hpp>
#include <bsprng/grain.hpp>
#include <bsprng/lfsr.hpp>
#include <bsprng/mickey.hpp>
#include <bsprng/seedgen.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

// Keystream generation in terms of lanes.
//
// A request names an algorithm, an engine (naive bit-serial or bitsliced) and
// a lane count L (32 or 64). With a master seed, lane j runs on
// seedgen-derived material for (algo, j, L); with an explicit key/IV there is
// a single lane. Output is lane-major: ceil(nbytes / L) bytes of lane 0, then
// lane 1, ..., truncated to nbytes. Both engines give identical bytes.
//
// Byte packing follows each cipher's reference code: MICKEY and LFSR lanes
// are MSB-first, Grain is LSB-first, AES-CTR is the ciphertext bytes.
namespace bsprng {

enum class Impl
{
  naive,
  sliced,
};

enum class Interleave
{
  lane, // lane-major blocks
  bit,  // one W-bit word per clock, lane j in bit j, words little-endian
};

struct StreamConfig
{
  seedgen::Algo algo = seedgen::Algo::mickey;
  Impl impl = Impl::sliced;
  std::size_t lanes = 64;
  Interleave interleave = Interleave::lane;
  std::optional<seedgen::MasterSeed> seed;
  std::optional<Bytes> key;
  std::optional<Bytes> iv; // IV, or the 12-byte nonce for AES-CTR
  std::optional<FeedbackSpec> poly;

  std::size_t effective_lanes() const noexcept { return key ? 1 : lanes; }

  void validate() const
  {
    if (lanes != 32 && lanes != 64) throw ValidationError("lane width must be 32 or 64");
    if (seed && key) throw ValidationError("give either a master seed or an explicit key, not both");
    if (!seed && !key) throw ValidationError("a master seed or an explicit key is required");
    if (key && !iv) throw ValidationError("an explicit key needs an IV (nonce for AES-CTR)");
    if (algo == seedgen::Algo::lfsr) {
      if (!poly) throw ValidationError("LFSR generation needs a feedback polynomial");
      if (key) throw ValidationError("LFSR lanes are seeded from a master seed");
    }
    if (algo == seedgen::Algo::aes_ctr && key && iv) {
      aes::make_key(*key);
      aes::make_nonce(*iv);
    }
    if (algo == seedgen::Algo::mickey && key) mickey::KeyIv::make(*key, *iv).validate();
    if (algo == seedgen::Algo::grain && key) grain::KeyIv::make(*key, *iv).validate();
  }
};

inline BitOrder
lane_bit_order(seedgen::Algo algo) noexcept
{
  return algo == seedgen::Algo::grain ? BitOrder::lsb_first : BitOrder::msb_first;
}

namespace detail {

inline mickey::KeyIv
mickey_material(const StreamConfig& c, std::size_t lane)
{
  if (c.key) return mickey::KeyIv::make(*c.key, *c.iv);
  return seedgen::mickey_lane(*c.seed, lane, c.lanes);
}

inline grain::KeyIv
grain_material(const StreamConfig& c, std::size_t lane)
{
  if (c.key) return grain::KeyIv::make(*c.key, *c.iv);
  return seedgen::grain_lane(*c.seed, lane, c.lanes);
}

inline seedgen::AesLane
aes_material(const StreamConfig& c, std::size_t lane)
{
  if (c.key) return { aes::make_key(*c.key), aes::make_nonce(*c.iv) };
  return seedgen::aes_lane(*c.seed, lane, c.lanes);
}

template<SliceWord W>
std::vector<Bytes>
sliced_lanes(const StreamConfig& c, std::size_t lanes, std::size_t bytes_per_lane)
{
  const std::size_t clocks = bytes_per_lane * 8;
  std::vector<W> words(clocks);
  switch (c.algo) {
    case seedgen::Algo::mickey: {
      std::vector<mickey::KeyIv> m;
      for (std::size_t j = 0; j < lanes; j++) m.push_back(mickey_material(c, j));
      auto st = mickey::sliced_init<W>(m);
      mickey::sliced_generate<W>(st, words);
      break;
    }
    case seedgen::Algo::grain: {
      std::vector<grain::KeyIv> m;
      for (std::size_t j = 0; j < lanes; j++) m.push_back(grain_material(c, j));
      auto st = grain::sliced_init<W>(m);
      grain::sliced_generate<W>(st, words);
      break;
    }
    case seedgen::Algo::lfsr: {
      std::vector<Bits> seeds;
      for (std::size_t j = 0; j < lanes; j++) seeds.push_back(seedgen::lfsr_lane(*c.seed, j, c.poly->degree(), c.lanes));
      auto l = SlicedLfsr<W>::from_lane_states(*c.poly, seeds);
      for (auto& w : words) w = l.step();
      break;
    }
    case seedgen::Algo::aes_ctr: {
      // Each lane is its own CTR stream; the sliced engine batches its counters.
      std::vector<Bytes> out;
      for (std::size_t j = 0; j < lanes; j++) {
        const auto m = aes_material(c, j);
        out.push_back(aes::ctr_keystream<W>(m.key, m.nonce, bytes_per_lane));
      }
      return out;
    }
  }
  auto all = words_to_lane_bytes<W>(std::span<const W>(words), lane_bit_order(c.algo));
  all.resize(lanes);
  return all;
}

} // namespace detail

// bytes_per_lane bytes for every lane.
inline std::vector<Bytes>
lane_streams(const StreamConfig& c, std::size_t bytes_per_lane)
{
  c.validate();
  const std::size_t lanes = c.effective_lanes();
  if (c.impl == Impl::sliced) {
    return c.lanes == 32 ? detail::sliced_lanes<std::uint32_t>(c, lanes, bytes_per_lane)
                         : detail::sliced_lanes<std::uint64_t>(c, lanes, bytes_per_lane);
  }
  std::vector<Bytes> out;
  out.reserve(lanes);
  for (std::size_t j = 0; j < lanes; j++) {
    switch (c.algo) {
      case seedgen::Algo::mickey: {
        auto st = mickey::scalar_init(detail::mickey_material(c, j));
        out.push_back(mickey::scalar_keystream_bytes(st, bytes_per_lane));
        break;
      }
      case seedgen::Algo::grain: {
        auto st = grain::scalar_init(detail::grain_material(c, j));
        out.push_back(grain::scalar_keystream_bytes(st, bytes_per_lane));
        break;
      }
      case seedgen::Algo::lfsr: {
        ScalarLfsr l(*c.poly, seedgen::lfsr_lane(*c.seed, j, c.poly->degree(), c.lanes));
        out.push_back(pack_bits(l.generate(bytes_per_lane * 8), BitOrder::msb_first));
        break;
      }
      case seedgen::Algo::aes_ctr: {
        const auto m = detail::aes_material(c, j);
        out.push_back(aes::ctr_keystream_scalar(m.key, m.nonce, bytes_per_lane));
        break;
      }
    }
  }
  return out;
}

// Re-slices per-lane streams into clock words (see Interleave::bit).
inline Bytes
interleave_bits(const std::vector<Bytes>& lanes, std::size_t word_bytes, BitOrder order, std::size_t nbytes)
{
  Bytes out(nbytes, 0);
  const std::size_t word_bits = word_bytes * 8;
  for (std::size_t pos = 0; pos < nbytes * 8; pos++) {
    const std::size_t t = pos / word_bits, j = pos % word_bits;
    if (j >= lanes.size()) continue;
    const auto& lane = lanes[j];
    if (t / 8 >= lane.size()) continue;
    const unsigned sh = order == BitOrder::msb_first ? 7u - (t & 7u) : (t & 7u);
    const std::uint8_t bit = (lane[t / 8] >> sh) & 1u;
    out[pos / 8] |= static_cast<std::uint8_t>(bit << (pos % 8));
  }
  return out;
}

inline Bytes
generate(const StreamConfig& c, std::size_t nbytes)
{
  c.validate();
  if (nbytes == 0) return {};
  const std::size_t lanes = c.effective_lanes();
  if (c.interleave == Interleave::bit) {
    const std::size_t word_bytes = c.lanes / 8;
    const std::size_t clocks = (nbytes + word_bytes - 1) / word_bytes;
    const auto ls = lane_streams(c, (clocks + 7) / 8);
    return interleave_bits(ls, word_bytes, lane_bit_order(c.algo), nbytes);
  }
  const std::size_t share = (nbytes + lanes - 1) / lanes;
  const auto ls = lane_streams(c, share);
  Bytes out;
  out.reserve(share * lanes);
  for (const auto& l : ls) out.insert(out.end(), l.begin(), l.end());
  out.resize(nbytes);
  return out;
}

} // namespace bsprng
