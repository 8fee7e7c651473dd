#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace metastab {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream roles keep seeds derived for different purposes statistically
// disjoint even when (master, index) coincide.
enum class StreamRole : std::uint64_t {
  GraphGen = 1,
  Trial = 2,
  EqMeasure = 3,
  Trajectory = 4,
  Field = 5,
  Bootstrap = 6,
  Attempt = 7,
};

// Derived seeds are a pure function of (master, index, role), so parallel
// trials and coupled samplers are reproducible and schedule-independent.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                 StreamRole role) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ (0x100000001b3ULL * index));
  h = splitmix64(h ^ static_cast<std::uint64_t>(role));
  return h;
}

// mt19937_64 wrapper with hand-rolled distributions. std:: distributions are
// implementation-defined, which would break the bit-reproducibility contract
// across standard libraries; everything here is pinned.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // uniform in [0,1), 53 bits
  double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // uniform in (0,1]
  double u01_pos() { return 1.0 - u01(); }

  double exponential(double rate) { return -std::log(u01_pos()) / rate; }

  // Box-Muller, one value per two uniforms
  double normal() {
    const double two_pi = 6.283185307179586476925286766559;
    double r = std::sqrt(-2.0 * std::log(u01_pos()));
    return r * std::cos(two_pi * u01());
  }

  // unbiased uniform integer in [0, n)
  std::uint64_t uniform_below(std::uint64_t n) {
    std::uint64_t x, r;
    do {
      x = eng_();
      r = x % n;
    } while (x - r > static_cast<std::uint64_t>(-n));
    return r;
  }

  bool bernoulli(double p) { return u01() < p; }

  // Inversion below mean 30, PTRS transformed rejection above.
  std::uint64_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 30.0) return poisson_inversion(mean);
    return poisson_ptrs(mean);
  }

 private:
  std::uint64_t poisson_inversion(double mean) {
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double prod = u01_pos();
    while (prod > limit) {
      ++k;
      prod *= u01_pos();
    }
    return k;
  }

  std::uint64_t poisson_ptrs(double mean) {
    // Hormann (1993), PTRS
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
      double u = u01() - 0.5;
      double v = u01_pos();
      double us = 0.5 - std::fabs(u);
      double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
      if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
      if (kf < 0.0 || (us < 0.013 && v > us)) continue;
      if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
          kf * loglam - mean - std::lgamma(kf + 1.0)) {
        return static_cast<std::uint64_t>(kf);
      }
    }
  }

  std::mt19937_64 eng_;
};

}  // namespace metastab
