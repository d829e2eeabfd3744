#pragma once

#include <span>
#include <string>
#include <vector>

#include "prs/features.hpp"

namespace prs {

// Confusion-matrix summary at a threshold plus ranking/probability scores.
// degenerate marks any quantity whose denominator vanished (that quantity is
// reported as 0, AUC as 0.5).
struct MetricReport {
  long tp = 0, fp = 0, tn = 0, fn = 0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  double mcc = 0.0;
  double auc = 0.5;
  double brier = 0.0;
  bool degenerate = false;
};

// Predicted label is 1 iff p >= tau.  AUC is the Mann-Whitney statistic with
// average ranks for ties (ties credit 1/2).  Requires matching non-empty
// spans and tau in (0, 1).
MetricReport evaluate_metrics(std::span<const int> y,
                              std::span<const double> p, double tau);

enum class VifStatus { Ok, ExactCollinear };

struct VifResult {
  std::vector<double> vif;         // per column; +inf when exactly collinear
  std::vector<VifStatus> status;
  std::vector<std::string> columns;
};

// Variance inflation factors: column k is regressed on the remaining columns
// plus an intercept, VIF_k = 1 / (1 - R^2_k).  At least two columns, no
// constant column (ConstantColumn otherwise).  1 - R^2 below 1e-12 reports
// +inf with the ExactCollinear status instead of failing.
VifResult compute_vif(const ActionMatrix& m);

}  // namespace prs
