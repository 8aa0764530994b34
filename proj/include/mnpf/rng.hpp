#pragma once

#include "mnpf/types.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace mnpf {

/// Seeded random source. All distributions are implemented on top of the
/// raw 64-bit stream so that a given seed produces the same draws on every
/// platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Index in [0, n).
  int uniform_int(int n) {
    int k = static_cast<int>(uniform() * n);
    return k < n ? k : n - 1;
  }

  // Sample an index proportionally to nonnegative weights.
  int categorical(const Vec& weights) {
    const double total = weights.sum();
    double u = uniform() * total;
    for (int k = 0; k < weights.size() - 1; ++k) {
      u -= weights[k];
      if (u < 0.0) return k;
    }
    return static_cast<int>(weights.size()) - 1;
  }

  double exponential() { return -std::log1p(-uniform()); }

  // Flat Dirichlet over k slots (normalized unit exponentials).
  Vec dirichlet(int k) {
    Vec x(k);
    for (int j = 0; j < k; ++j) x[j] = exponential();
    return x / x.sum();
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace mnpf
