#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace doclay {

// Seeded 64-bit generator with portable draws. The std distributions are
// implementation-defined, so uniform reals and ranged integers are derived
// from raw engine output here to keep corpora identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [lo, hi] (inclusive), rejection sampled.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Substream seed for one page: FNV-1a over the page id, mixed with the
// corpus seed. Independent of page order and sharding.
std::uint64_t substream_seed(std::uint64_t seed, std::string_view key);

}  // namespace doclay
