#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prs/metrics.hpp"
#include "prs/model.hpp"
#include "prs/parallel.hpp"

namespace prs {

struct LearnerConfig {
  ModelKind kind = ModelKind::Cloglog;
  CloglogConfig glm;
  GbtConfig gbt;
};

FittedModel fit_learner(const ActionMatrix& m, const LearnerConfig& lc,
                        std::uint64_t fit_seed);

struct OobEval {
  std::vector<MetricReport> replications;
  MetricReport mean;  // field-wise mean over replications
  MetricReport se;    // field-wise standard error (sd / sqrt(B))
  double mean_oob_fraction = 0.0;
  int redraws = 0;  // replications redrawn for a single-class in-bag sample
};

// Out-of-bag bootstrap model assessment: each replication trains on a
// bootstrap draw (with replacement, original size) and scores the rows the
// draw missed, classifying at the in-bag prevalence.  Single-class in-bag
// samples are redrawn with a perturbed sub-seed up to retry_limit times.
// Deterministic for fixed (seed, B); Serial and OpenMP agree bitwise.
OobEval oob_bootstrap_eval(const ActionMatrix& m, const LearnerConfig& lc,
                           int B, std::uint64_t seed,
                           ExecMode exec = ExecMode::Serial,
                           int retry_limit = 8);

struct ImportanceRow {
  std::string feature;
  double estimate = 0.0;      // GLM: raw coefficient; GBT: gain share
  double std_estimate = 0.0;  // GLM: coefficient x column sd; GBT: = estimate
  double ci_low = 0.0;        // percentile bounds over bootstrap refits
  double ci_high = 0.0;
};

// Per-feature effect sizes with percentile confidence bounds from B bootstrap
// refits of the same learner configuration.  B must be at least 100.
std::vector<ImportanceRow> feature_importance(const FittedModel& model,
                                              const ActionMatrix& m, int B,
                                              std::uint64_t seed,
                                              ExecMode exec = ExecMode::Serial,
                                              double level = 0.90,
                                              int retry_limit = 8);

}  // namespace prs
