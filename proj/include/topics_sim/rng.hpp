#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace topics_sim {

// Every random decision in a run belongs to exactly one labelled stream.
enum class StreamPurpose : std::uint64_t {
  kWorldTopics = 1,
  kWorldPlacement = 2,
  kWorldInterest = 3,
  kVisits = 4,
  kSticky = 5,
  kTieBreak = 6,
  kWinner = 7,
  kTest = 99,
};

// Structured label of a stream: purpose plus up to two indices, typically
// (user, epoch) or (network, 0).
struct StreamPath {
  StreamPurpose purpose;
  std::uint64_t first = 0;
  std::uint64_t second = 0;
};

// Deterministic random stream. Draws are defined entirely in terms of the
// raw 64-bit outputs of std::mt19937_64, which the standard pins down, so the
// sequences are identical across platforms and standard libraries.
class RngStream {
 public:
  explicit RngStream(std::uint64_t state_seed) : engine_(state_seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, bound). bound must be positive.
  std::uint64_t uniform_index(std::uint64_t bound);

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  // `count` distinct values from [0, population), in draw order.
  // Requires count <= population.
  std::vector<std::uint32_t> sample_without_replacement(std::uint32_t population, std::uint32_t count);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[uniform_index(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Stream for `path` under the run seed. Distinct paths give unrelated
// sequences; identical (seed, path) pairs always give the same sequence.
RngStream derive_stream(std::uint64_t seed, const StreamPath& path);

}  // namespace topics_sim
