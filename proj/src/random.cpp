#include "benfrag/random.hpp"

namespace benfrag {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix_finalize(std::uint64_t z) noexcept
{
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

} // namespace

std::uint64_t mix_stream_seed(std::uint64_t seed, std::uint64_t index) noexcept
{
  const std::uint64_t first = splitmix_finalize(seed + kGolden * (index + 1));
  return splitmix_finalize(first ^ (index * 0xD1B54A32D192ED03ULL));
}

Engine make_stream(std::uint64_t seed, std::uint64_t index)
{
  return Engine{ mix_stream_seed(seed, index) };
}

} // namespace benfrag
