#pragma once

#include <cstdint>
#include <random>

namespace benfrag {

using Engine = std::mt19937_64;

/// Avalanche mix of an experiment seed and a substream index (trial, tree,
/// block). Two rounds of the splitmix64 finalizer over
/// `seed + golden * (index + 1)`, so neighbouring indices land far apart.
std::uint64_t mix_stream_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Independent engine for substream `index` of `seed`. Every trial owns one,
/// which makes results independent of how trials are scheduled on workers.
Engine make_stream(std::uint64_t seed, std::uint64_t index);

/// Uniform on (0, 1] with 53 random bits; never returns 0, so logs are finite.
inline double uniform_open_closed(Engine& rng)
{
  return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

/// Uniform on [0, 1) with 53 random bits.
inline double uniform_closed_open(Engine& rng)
{
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace benfrag

namespace benfrag {

/// Uniform on the open interval (0, 1): midpoints of the 2^53 dyadic cells.
/// Both u and 1 - u are bounded away from zero.
inline double uniform_open(Engine& rng)
{
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace benfrag
