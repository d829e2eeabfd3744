#pragma once

#include "prs/features.hpp"
#include "prs/model.hpp"

namespace prs {

// Gradient-boosted trees on the logistic loss.  Exact greedy splits over
// sorted feature values, gain
//   (GL^2/(HL+lambda) + GR^2/(HR+lambda) - G^2/(H+lambda)) / 2
// with lambda fixed at 1, leaf weight -G/(H+lambda) scaled by the learning
// rate.  Rows are subsampled per round (Bernoulli, config.subsample).  A node
// where no split clears the gain floor becomes a leaf and is counted in
// train_meta.degenerate_splits.  Deterministic for a fixed config and seed.
// Requires both classes and at least 2 * min_leaf rows; rounds = 0 yields the
// constant prevalence predictor.
FittedModel fit_gbt(const ActionMatrix& m, const GbtConfig& cfg = {});

}  // namespace prs
