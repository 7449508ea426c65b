#pragma once

// Saturating 64-bit counting helpers for feasibility checks. Anything that
// overflows clamps to UINT64_MAX, which always trips the caps downstream.

#include <cstdint>

namespace trn {

inline constexpr std::uint64_t kCountSat = UINT64_MAX;

inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = a + b;
  return r < a ? kCountSat : r;
}

inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kCountSat / b) return kCountSat;
  return a * b;
}

inline std::uint64_t sat_pow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  while (exp--) r = sat_mul(r, base);
  return r;
}

inline std::uint64_t sat_factorial(unsigned n) {
  std::uint64_t r = 1;
  for (unsigned i = 2; i <= n; ++i) r = sat_mul(r, i);
  return r;
}

inline std::uint64_t sat_binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    // r * (n - k + i) is divisible by i at every step.
    std::uint64_t t = sat_mul(r, n - k + i);
    if (t == kCountSat) return kCountSat;
    r = t / i;
  }
  return r;
}

// Number of unordered partitions of an s-element set into d blocks of size
// s/d. Equals the count visited by the canonical partition enumerators.
inline std::uint64_t sat_equipartitions(unsigned s, unsigned d) {
  const unsigned bs = s / d;
  std::uint64_t r = 1;
  unsigned remaining = s;
  for (unsigned b = 0; b + 1 < d; ++b) {
    r = sat_mul(r, sat_binomial(remaining - 1, bs - 1));
    remaining -= bs;
  }
  return r;
}

}  // namespace trn
