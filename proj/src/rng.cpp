#include "topics_sim/rng.hpp"

#include <algorithm>
#include <unordered_set>

namespace topics_sim {

namespace {

// SplitMix64 finalizer; used only to decorrelate stream seeds.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t RngStream::uniform_index(std::uint64_t bound) {
  // Lemire's multiply-shift with rejection; unbiased.
  unsigned __int128 product = static_cast<unsigned __int128>(engine_()) * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      product = static_cast<unsigned __int128>(engine_()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

std::vector<std::uint32_t> RngStream::sample_without_replacement(std::uint32_t population, std::uint32_t count) {
  std::vector<std::uint32_t> out;
  out.reserve(count);
  if (count == 0) return out;
  if (static_cast<std::uint64_t>(count) * 4 >= population) {
    // Dense case: partial Fisher-Yates over the whole range.
    std::vector<std::uint32_t> pool(population);
    for (std::uint32_t i = 0; i < population; ++i) pool[i] = i;
    for (std::uint32_t i = 0; i < count; ++i) {
      const auto j = i + static_cast<std::uint32_t>(uniform_index(population - i));
      std::swap(pool[i], pool[j]);
      out.push_back(pool[i]);
    }
    return out;
  }
  // Sparse case: rejection against the values already drawn.
  std::unordered_set<std::uint32_t> seen;
  seen.reserve(count * 2);
  while (out.size() < count) {
    const auto v = static_cast<std::uint32_t>(uniform_index(population));
    if (seen.insert(v).second) out.push_back(v);
  }
  return out;
}

RngStream derive_stream(std::uint64_t seed, const StreamPath& path) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ static_cast<std::uint64_t>(path.purpose));
  h = mix64(h ^ path.first);
  h = mix64(h ^ (path.second + 0x632be59bd9b4e019ULL));
  return RngStream(h);
}

}  // namespace topics_sim
