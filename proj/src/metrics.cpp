#include "prs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/QR>

#include "prs/error.hpp"
#include "prs/stats.hpp"

namespace prs {

MetricReport evaluate_metrics(std::span<const int> y,
                              std::span<const double> p, double tau) {
  if (y.empty() || y.size() != p.size())
    throw PrsError("BadValue", "metrics need matching non-empty spans");
  if (!(tau > 0.0 && tau < 1.0))
    throw PrsError("BadValue", "threshold must lie in (0, 1)");

  MetricReport r;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const bool pos = p[i] >= tau;
    if (y[i] == 1) (pos ? r.tp : r.fn)++;
    else (pos ? r.fp : r.tn)++;
  }

  auto ratio = [&](long num, long den) {
    if (den == 0) {
      r.degenerate = true;
      return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
  };
  r.sensitivity = ratio(r.tp, r.tp + r.fn);
  r.specificity = ratio(r.tn, r.tn + r.fp);
  r.precision = ratio(r.tp, r.tp + r.fp);
  if (r.precision + r.sensitivity > 0.0) {
    r.f1 = 2.0 * r.precision * r.sensitivity / (r.precision + r.sensitivity);
  } else {
    r.f1 = 0.0;
    r.degenerate = true;
  }

  const double mcc_den =
      std::sqrt(static_cast<double>(r.tp + r.fp)) *
      std::sqrt(static_cast<double>(r.tp + r.fn)) *
      std::sqrt(static_cast<double>(r.tn + r.fp)) *
      std::sqrt(static_cast<double>(r.tn + r.fn));
  if (mcc_den == 0.0) {
    r.mcc = 0.0;
    r.degenerate = true;
  } else {
    r.mcc = (static_cast<double>(r.tp) * r.tn -
             static_cast<double>(r.fp) * r.fn) /
            mcc_den;
  }

  // Rank-sum AUC, ties averaged.
  const long n1 = r.tp + r.fn;
  const long n0 = r.tn + r.fp;
  if (n1 == 0 || n0 == 0) {
    r.auc = 0.5;
    r.degenerate = true;
  } else {
    std::vector<std::size_t> idx(y.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < idx.size()) {
      std::size_t j = i;
      while (j + 1 < idx.size() && p[idx[j + 1]] == p[idx[i]]) ++j;
      const double avg_rank = 0.5 * (static_cast<double>(i + 1) +
                                     static_cast<double>(j + 1));
      for (std::size_t k = i; k <= j; ++k)
        if (y[idx[k]] == 1) rank_sum_pos += avg_rank;
      i = j + 1;
    }
    r.auc = (rank_sum_pos -
             0.5 * static_cast<double>(n1) * (static_cast<double>(n1) + 1.0)) /
            (static_cast<double>(n1) * static_cast<double>(n0));
  }

  KahanSum sq;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = static_cast<double>(y[i]) - p[i];
    sq.add(d * d);
  }
  r.brier = sq.get() / static_cast<double>(y.size());
  return r;
}

VifResult compute_vif(const ActionMatrix& m) {
  const int K = m.cols();
  const int H = m.rows();
  if (K < 2)
    throw PrsError("BadValue", "VIF needs at least two columns");
  if (H < K + 1)
    throw PrsError("BadValue", "VIF needs more rows than columns");

  for (int k = 0; k < K; ++k) {
    const double lo = m.X.col(k).minCoeff();
    const double hi = m.X.col(k).maxCoeff();
    if (lo == hi)
      throw PrsError("ConstantColumn",
                     "column '" + m.spec.columns[k] + "' is constant");
  }

  VifResult out;
  out.columns = m.spec.columns;
  out.vif.resize(K);
  out.status.assign(K, VifStatus::Ok);

  Eigen::MatrixXd design(H, K);  // column k replaced by the intercept
  for (int k = 0; k < K; ++k) {
    int c = 0;
    for (int j = 0; j < K; ++j)
      if (j != k) design.col(c++) = m.X.col(j);
    design.col(K - 1).setOnes();

    const Eigen::VectorXd target = m.X.col(k);
    const Eigen::VectorXd coef =
        design.colPivHouseholderQr().solve(target);
    const double ss_res = (target - design * coef).squaredNorm();
    const double mean_k = target.mean();
    const double ss_tot =
        (target.array() - mean_k).matrix().squaredNorm();
    const double frac = ss_res / ss_tot;  // 1 - R^2
    if (frac < 1e-12) {
      out.vif[k] = std::numeric_limits<double>::infinity();
      out.status[k] = VifStatus::ExactCollinear;
    } else {
      out.vif[k] = 1.0 / frac;
    }
  }
  return out;
}

}  // namespace prs
