#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "prs/error.hpp"

namespace prs {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives one well-mixed seed from up to three components.  Used to key
// independent streams, e.g. (base_seed, replication index, salt).
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b = 0,
                              std::uint64_t c = 0) {
  std::uint64_t x = splitmix64(a);
  x = splitmix64(x ^ splitmix64(b + 0x6a09e667f3bcc909ULL));
  x = splitmix64(x ^ splitmix64(c + 0xbb67ae8584caa73bULL));
  return x;
}

// Stream salts.  Each consumer of randomness gets its own namespace so that
// adding a draw in one place never shifts the sequence seen by another.
inline constexpr std::uint64_t kSaltSynth = 0x53594e;
inline constexpr std::uint64_t kSaltOob = 0x4f4f42;
inline constexpr std::uint64_t kSaltPrs = 0x505253;
inline constexpr std::uint64_t kSaltImportance = 0x494d50;
inline constexpr std::uint64_t kSaltModel = 0x4d4f44;
inline constexpr std::uint64_t kSaltEval = 0x45564c;

// Deterministic random stream.  All transforms are hand rolled so results
// never depend on the standard library's distribution implementations, which
// differ across platforms.  std::mt19937_64 itself is specified exactly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  static Rng stream(std::uint64_t base, std::uint64_t idx,
                    std::uint64_t salt = 0) {
    return Rng(mix_seed(base, idx, salt));
  }

  std::uint64_t next_u64() { return eng_(); }

  // [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  // (0, 1]; safe as a log() argument.
  double uniform01_pos() {
    return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Unbiased integer in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw PrsError("BadValue", "Rng::below requires n > 0");
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t lim = max - max % n;
    std::uint64_t x = eng_();
    while (x >= lim) x = eng_();
    return x % n;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  double normal(double mu = 0.0, double sd = 1.0) {
    if (has_spare_) {
      has_spare_ = false;
      return mu + sd * spare_;
    }
    const double u1 = uniform01_pos();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return mu + sd * r * std::cos(t);
  }

  // Knuth's product method; fine for the small lambdas used here.
  int poisson(double lambda) {
    if (!(lambda >= 0.0))
      throw PrsError("BadValue", "poisson requires lambda >= 0");
    const double limit = std::exp(-lambda);
    int k = 0;
    double prod = uniform01_pos();
    while (prod > limit) {
      ++k;
      prod *= uniform01_pos();
    }
    return k;
  }

  // Index drawn proportionally to non-negative weights (need not sum to 1).
  int categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0))
        throw PrsError("BadValue", "categorical weight must be >= 0");
      total += w;
    }
    if (total <= 0.0)
      throw PrsError("BadValue", "categorical requires a positive total weight");
    double u = uniform01() * total;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      u -= weights[i];
      if (u < 0.0) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
  }

  // Multiplicity of each of n items after n draws with replacement.
  std::vector<int> resample_counts(std::size_t n) {
    std::vector<int> counts(n, 0);
    for (std::size_t i = 0; i < n; ++i) ++counts[below(n)];
    return counts;
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace prs
