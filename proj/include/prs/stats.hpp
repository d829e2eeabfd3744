#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace prs {

double mean(std::span<const double> v);

// Sample standard deviation, divisor n - 1.  Requires at least two values.
double sample_sd(std::span<const double> v);

// Quantile with linear interpolation between order statistics (the default
// "type 7" rule in most statistics environments): h = (n - 1) p, result is
// x[floor(h)] + (h - floor(h)) * (x[floor(h) + 1] - x[floor(h)]).
// Input must already be sorted ascending and non-empty; p in [0, 1].
double quantile_sorted(std::span<const double> sorted, double p);

std::vector<double> sorted_copy(std::span<const double> v);

// log(k!) from a cached table; k up to 4096.
double log_factorial(int k);

// Compensated accumulation for long sums whose result feeds comparisons.
struct KahanSum {
  double sum = 0.0;
  double c = 0.0;
  void add(double v) {
    const double y = v - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  double get() const { return sum; }
};

// FNV-1a, 64-bit.  Used to fingerprint artifacts in the run manifest.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

}  // namespace prs
