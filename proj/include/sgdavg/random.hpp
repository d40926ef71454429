#ifndef SGDAVG_RANDOM_HPP_
#define SGDAVG_RANDOM_HPP_

#include <cstdint>
#include <random>

namespace sgdavg {

// The generator is pinned to mt19937_64 and every draw below is written out
// by hand (no std::*_distribution), so streams are reproducible across
// standard-library implementations.
using Rng = std::mt19937_64;

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Independent stream for (seed, stream_id).
Rng make_stream(std::uint64_t seed, std::uint64_t stream_id);

/// Uniform integer on {0, ..., n-1} by rejection; n >= 1.
std::uint64_t uniform_index(Rng &rng, std::uint64_t n);

/// Uniform double on [0, 1) with 53 random bits.
double uniform01(Rng &rng);

/// Standard normal via the Marsaglia polar method (no cached second value).
double standard_normal(Rng &rng);

} // namespace sgdavg

#endif // SGDAVG_RANDOM_HPP_
