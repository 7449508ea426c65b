#pragma once

// Deterministic RNG with explicit state, no globals. mt19937_64 keeps the
// bit stream identical across platforms; bounded() avoids
// std::uniform_int_distribution, whose mapping is implementation-defined.

#include <cstdint>
#include <random>
#include <vector>

namespace trn {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

  // Stream for task `index` of a run seeded with `master`. Task streams are
  // independent of worker count and scheduling.
  static Rng for_task(std::uint64_t master, std::uint64_t index) {
    return Rng(splitmix64(master ^ (0x517cc1b727220a95ull * (index + 1))));
  }

  std::uint64_t next() { return gen_(); }

  bool coin() { return (next() >> 63) != 0; }

  // Uniform in [0, n). Rejection sampling, exact for any n >= 1.
  std::uint64_t bounded(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % n;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(bounded(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace trn
