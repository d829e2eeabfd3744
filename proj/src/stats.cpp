#include "prs/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "prs/error.hpp"

namespace prs {

double mean(std::span<const double> v) {
  if (v.empty()) throw PrsError("BadValue", "mean of an empty range");
  KahanSum acc;
  for (double x : v) acc.add(x);
  return acc.get() / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v) {
  if (v.size() < 2)
    throw PrsError("BadValue", "sample_sd needs at least two values");
  const double m = mean(v);
  KahanSum acc;
  for (double x : v) acc.add((x - m) * (x - m));
  return std::sqrt(acc.get() / static_cast<double>(v.size() - 1));
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty())
    throw PrsError("BadValue", "quantile of an empty range");
  if (!(p >= 0.0 && p <= 1.0))
    throw PrsError("BadValue", "quantile level must lie in [0, 1]");
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = (static_cast<double>(n) - 1.0) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::vector<double> sorted_copy(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  std::sort(out.begin(), out.end());
  return out;
}

double log_factorial(int k) {
  static constexpr int kMax = 4096;
  static const std::vector<double> table = [] {
    std::vector<double> t(kMax + 1, 0.0);
    for (int i = 2; i <= kMax; ++i)
      t[i] = t[i - 1] + std::log(static_cast<double>(i));
    return t;
  }();
  if (k < 0 || k > kMax)
    throw PrsError("BadValue", "log_factorial argument out of range");
  return table[k];
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= static_cast<std::uint64_t>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return std::string(buf);
}

}  // namespace prs
