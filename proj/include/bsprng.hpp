#pragma once

// Bitsliced pseudo-random generation: LFSR, CRC-8, MICKEY 2.0, Grain v1 and
// AES-128 CTR engines, per-lane seed derivation, a NIST SP 800-22 subset and a
// throughput harness.

#include <bsprng/aes.hpp>
#include <bsprng/aes_ctr.hpp>
#include <bsprng/bench.hpp>
#include <bsprng/bits.hpp>
#include <bsprng/bitslab.hpp>
#include <bsprng/crc8.hpp>
#include <bsprng/error.hpp>
#include <bsprng/grain.hpp>
#include <bsprng/lfsr.hpp>
#include <bsprng/mickey.hpp>
#include <bsprng/seedgen.hpp>
#include <bsprng/special.hpp>
#include <bsprng/stats.hpp>
#include <bsprng/streams.hpp>
#include <bsprng/vectors.hpp>
#include <bsprng/word.hpp>
