#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "prs/coalition.hpp"

namespace prs {

// Classical Shapley coefficient |C|!(n-|C|-1)!/n! renormalized over the
// player's support, computed in log space:
//   w(C) = exp(l(C) - max) / sum_C' exp(l(C') - max),
//   l(C) = lgamma-style log factorials of |C| and n-|C|-1 minus log n!.
// Entries must omit the player (popcount < n); the weights sum to 1.
std::vector<double> restricted_weights(int n,
                                       std::span<const SupportEntry> support);

struct ShapleyResult {
  std::vector<double> phi;
};

// Exact classical Shapley value by full subset enumeration; n at most 20
// (TooLarge otherwise).  worth(mask) must be defined for every subset.
ShapleyResult classical_shapley(
    int n, const std::function<double(std::uint64_t)>& worth);

// Restricted Shapley value: the classical marginal sum confined to each
// player's observed support with weights renormalized over it.  A player
// with empty support yields nullopt rather than 0.  worth must cover every
// support coalition and its union with the player (MissingWorth otherwise).
std::vector<std::optional<double>> restricted_shapley(
    int n, std::span<const std::vector<SupportEntry>> supports,
    const std::function<std::optional<double>(std::uint64_t)>& worth);

}  // namespace prs
