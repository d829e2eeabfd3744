#include "prs/shapley.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "prs/stats.hpp"

namespace prs {

std::vector<double> restricted_weights(int n,
                                       std::span<const SupportEntry> support) {
  if (n < 1) throw PrsError("BadValue", "weights need n >= 1");
  if (support.empty())
    throw PrsError("EmptySupport", "cannot weight an empty support");

  // Log of the classical coefficient |C|!(n-|C|-1)!/n! per entry, then a
  // log-sum-exp renormalization so the weights sum to exactly 1 over the
  // support regardless of n.
  std::vector<double> logw(support.size());
  const double log_n_fact = log_factorial(n);
  for (std::size_t i = 0; i < support.size(); ++i) {
    const int c = std::popcount(support[i].mask);
    if (c >= n)
      throw PrsError("BadValue",
                     "support coalition size must be below n");
    logw[i] = log_factorial(c) + log_factorial(n - c - 1) - log_n_fact;
  }
  const double mx = *std::max_element(logw.begin(), logw.end());
  double denom = 0.0;
  for (double lw : logw) denom += std::exp(lw - mx);

  std::vector<double> weights(support.size());
  double total = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    weights[i] = std::exp(logw[i] - mx) / denom;
    total += weights[i];
  }
  // Sweep the residual rounding into the largest weight.
  if (total != 1.0) {
    const std::size_t arg = static_cast<std::size_t>(
        std::max_element(weights.begin(), weights.end()) - weights.begin());
    weights[arg] += 1.0 - total;
  }
  return weights;
}

ShapleyResult classical_shapley(
    int n, const std::function<double(std::uint64_t)>& worth) {
  if (n < 1) throw PrsError("BadValue", "classical_shapley needs n >= 1");
  if (n > 20)
    throw PrsError("TooLarge",
                   "classical_shapley enumerates subsets; n must be <= 20");

  // w[s] = s!(n-s-1)!/n! for a coalition of size s not containing the player.
  std::vector<double> w(n);
  for (int s = 0; s < n; ++s)
    w[s] = std::exp(log_factorial(s) + log_factorial(n - s - 1) -
                    log_factorial(n));

  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  ShapleyResult res;
  res.phi.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    KahanSum acc;
    for (std::uint64_t mask = 0; mask <= full; ++mask) {
      if (mask & bit) continue;
      const int s = std::popcount(mask);
      acc.add(w[s] * (worth(mask | bit) - worth(mask)));
    }
    res.phi[i] = acc.get();
  }
  return res;
}

std::vector<std::optional<double>> restricted_shapley(
    int n, std::span<const std::vector<SupportEntry>> supports,
    const std::function<std::optional<double>(std::uint64_t)>& worth) {
  if (n < 1) throw PrsError("BadValue", "restricted_shapley needs n >= 1");

  std::vector<std::optional<double>> phi(supports.size());
  for (std::size_t i = 0; i < supports.size(); ++i) {
    if (supports[i].empty()) {
      phi[i] = std::nullopt;
      continue;
    }
    const std::uint64_t bit = std::uint64_t{1} << i;
    const std::vector<double> weights = restricted_weights(n, supports[i]);
    KahanSum acc;
    for (std::size_t j = 0; j < supports[i].size(); ++j) {
      const std::uint64_t c = supports[i][j].mask;
      if (c & bit)
        throw PrsError("BadValue",
                       "support coalition must not contain the player");
      const auto v_without = worth(c);
      const auto v_with = worth(c | bit);
      if (!v_without || !v_with)
        throw PrsError("MissingWorth",
                       "no worth for a support coalition (mask " +
                           std::to_string(c) + ")");
      acc.add(weights[j] * (*v_with - *v_without));
    }
    phi[i] = acc.get();
  }
  return phi;
}

}  // namespace prs
