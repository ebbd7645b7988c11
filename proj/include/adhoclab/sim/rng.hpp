#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace adhoclab::sim {

namespace detail {

/* FNV-1a, used to fold a stream label into the seed so that streams with
 * different labels are decorrelated even under the same run seed. */
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

/* splitmix64 step, scrambles the combined seed before it reaches the engine */
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace detail

/* Deterministic labeled PRNG stream. Identical (seed, label) pairs produce
 * identical sequences on every platform; distribution draws below are
 * hand-rolled because libstdc++'s std::normal_distribution and friends are
 * not bit-portable. The engine is seeded through seed_seq with a splitmix64
 * chain: single-word seeding leaves mt19937's early outputs correlated
 * across adjacent run seeds, which pooled statistics over many seeds can
 * detect. seed_seq's generate() is fully specified, so this stays portable. */
class RngStream {
 public:
  RngStream(std::uint64_t run_seed, std::string_view label)
      : engine_(make_engine(run_seed ^ detail::fnv1a(label))) {}

  std::uint64_t next_u64() { return engine_(); }

  /* uniform in [0, 1) with 53 random bits */
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /* uniform integer in [0, n) by rejection, n > 0 */
  std::uint64_t uniform_int(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  /* exponential with the given mean via inversion */
  double exponential(double mean) {
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    return -mean * std::log(u);
  }

  /* Box-Muller, one value per call (the pair's partner is discarded to keep
   * the draw count predictable) */
  double normal(double mean, double sd) {
    double u1;
    do {
      u1 = uniform();
    } while (u1 == 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sd * r * std::cos(6.283185307179586476925287 * u2);
  }

 private:
  static std::mt19937_64 make_engine(std::uint64_t folded) {
    std::uint32_t words[8];
    for (int i = 0; i < 4; ++i) {
      folded = detail::splitmix64(folded);
      words[2 * i] = static_cast<std::uint32_t>(folded);
      words[2 * i + 1] = static_cast<std::uint32_t>(folded >> 32);
    }
    std::seed_seq seq(words, words + 8);
    return std::mt19937_64(seq);
  }

  std::mt19937_64 engine_;
};

}  // namespace adhoclab::sim
