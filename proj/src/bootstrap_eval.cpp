#include "prs/bootstrap_eval.hpp"

#include <algorithm>
#include <cmath>

#include "prs/gbt.hpp"
#include "prs/glm.hpp"
#include "prs/rng.hpp"
#include "prs/stats.hpp"

namespace prs {

FittedModel fit_learner(const ActionMatrix& m, const LearnerConfig& lc,
                        std::uint64_t fit_seed) {
  if (lc.kind == ModelKind::Cloglog) return fit_cloglog(m, lc.glm);
  GbtConfig cfg = lc.gbt;
  cfg.seed = fit_seed;
  return fit_gbt(m, cfg);
}

namespace {

ActionMatrix rows_by_counts(const ActionMatrix& m,
                            const std::vector<int>& counts) {
  int total = 0;
  for (int c : counts) total += c;
  ActionMatrix out;
  out.spec = m.spec;
  out.X.resize(total, m.cols());
  out.y.resize(total);
  int r = 0;
  for (int i = 0; i < m.rows(); ++i)
    for (int c = 0; c < counts[i]; ++c) {
      out.X.row(r) = m.X.row(i);
      out.y(r) = m.y(i);
      ++r;
    }
  return out;
}

ActionMatrix rows_by_index(const ActionMatrix& m,
                           const std::vector<int>& rows) {
  ActionMatrix out;
  out.spec = m.spec;
  out.X.resize(static_cast<Eigen::Index>(rows.size()), m.cols());
  out.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.X.row(static_cast<Eigen::Index>(r)) = m.X.row(rows[r]);
    out.y(static_cast<Eigen::Index>(r)) = m.y(rows[r]);
  }
  return out;
}

bool single_class(const ActionMatrix& m) {
  const int ones = m.y.sum();
  return ones == 0 || ones == m.rows();
}

template <typename Get>
void aggregate(const std::vector<MetricReport>& reps, double MetricReport::*f,
               MetricReport& mean_out, MetricReport& se_out, Get get) {
  std::vector<double> vals;
  vals.reserve(reps.size());
  for (const auto& r : reps) vals.push_back(get(r));
  mean_out.*f = mean(vals);
  se_out.*f =
      vals.size() > 1 ? sample_sd(vals) / std::sqrt(static_cast<double>(vals.size()))
                      : 0.0;
}

}  // namespace

OobEval oob_bootstrap_eval(const ActionMatrix& m, const LearnerConfig& lc,
                           int B, std::uint64_t seed, ExecMode exec,
                           int retry_limit) {
  if (B < 2) throw PrsError("BadValue", "oob_bootstrap_eval needs B >= 2");
  const int H = m.rows();
  if (H < 2) throw PrsError("BadValue", "oob_bootstrap_eval needs rows");

  OobEval out;
  out.replications.resize(B);
  std::vector<double> oob_frac(B, 0.0);
  std::vector<int> redraws(B, 0);

  parallel_for(static_cast<std::size_t>(B), exec, [&](std::size_t b) {
    for (int attempt = 0;; ++attempt) {
      if (attempt > retry_limit)
        throw PrsError("ReplicationFailed",
                       "replication " + std::to_string(b) +
                           " kept drawing unusable samples");
      Rng rng = Rng::stream(seed, b, kSaltOob + attempt);
      const std::vector<int> counts = rng.resample_counts(H);
      std::vector<int> oob_rows;
      for (int i = 0; i < H; ++i)
        if (counts[i] == 0) oob_rows.push_back(i);
      if (oob_rows.empty()) {
        ++redraws[b];
        continue;
      }
      const ActionMatrix inbag = rows_by_counts(m, counts);
      if (single_class(inbag)) {
        ++redraws[b];
        continue;
      }
      FittedModel model;
      try {
        model = fit_learner(inbag, lc, mix_seed(seed, b, kSaltOob + attempt));
      } catch (const PrsError&) {
        ++redraws[b];
        continue;
      }
      const ActionMatrix heldout = rows_by_index(m, oob_rows);
      const std::vector<double> p = predict_proba(model, heldout);
      std::vector<int> yy(heldout.y.data(), heldout.y.data() + heldout.rows());
      out.replications[b] = evaluate_metrics(yy, p, model.threshold);
      oob_frac[b] = static_cast<double>(oob_rows.size()) / H;
      break;
    }
  });

  aggregate(out.replications, &MetricReport::sensitivity, out.mean, out.se,
            [](const MetricReport& r) { return r.sensitivity; });
  aggregate(out.replications, &MetricReport::specificity, out.mean, out.se,
            [](const MetricReport& r) { return r.specificity; });
  aggregate(out.replications, &MetricReport::precision, out.mean, out.se,
            [](const MetricReport& r) { return r.precision; });
  aggregate(out.replications, &MetricReport::f1, out.mean, out.se,
            [](const MetricReport& r) { return r.f1; });
  aggregate(out.replications, &MetricReport::mcc, out.mean, out.se,
            [](const MetricReport& r) { return r.mcc; });
  aggregate(out.replications, &MetricReport::auc, out.mean, out.se,
            [](const MetricReport& r) { return r.auc; });
  aggregate(out.replications, &MetricReport::brier, out.mean, out.se,
            [](const MetricReport& r) { return r.brier; });
  out.mean_oob_fraction = mean(oob_frac);
  for (int r : redraws) out.redraws += r;
  return out;
}

std::vector<ImportanceRow> feature_importance(const FittedModel& model,
                                              const ActionMatrix& m, int B,
                                              std::uint64_t seed,
                                              ExecMode exec, double level,
                                              int retry_limit) {
  if (B < 100)
    throw PrsError("BadValue", "feature_importance needs B >= 100");
  if (!(level > 0.0 && level < 1.0))
    throw PrsError("BadValue", "confidence level must lie in (0, 1)");
  const int K = m.cols();
  const int H = m.rows();

  LearnerConfig lc;
  lc.kind = model.kind;
  if (model.kind == ModelKind::Cloglog) lc.glm = model.glm.config;
  else lc.gbt = model.gbt.config;

  // Per-feature effect of one fitted model; layout matches spec.columns.
  auto extract = [&](const FittedModel& f) {
    std::vector<double> est(K, 0.0);
    if (f.kind == ModelKind::Cloglog) {
      for (int k = 0; k < K; ++k) est[k] = f.glm.coefficients[k + 1];
    } else {
      double total = 0.0;
      for (const auto& tree : f.gbt.trees)
        for (const auto& n : tree.nodes)
          if (!n.leaf) {
            est[n.feature] += n.gain;
            total += n.gain;
          }
      if (total > 0.0)
        for (double& e : est) e /= total;
    }
    return est;
  };

  const std::vector<double> point = extract(model);
  std::vector<std::vector<double>> draws(
      B, std::vector<double>(static_cast<std::size_t>(K), 0.0));

  parallel_for(static_cast<std::size_t>(B), exec, [&](std::size_t b) {
    for (int attempt = 0;; ++attempt) {
      if (attempt > retry_limit)
        throw PrsError("ReplicationFailed",
                       "importance replication " + std::to_string(b) +
                           " kept drawing unusable samples");
      Rng rng = Rng::stream(seed, b, kSaltImportance + attempt);
      const std::vector<int> counts = rng.resample_counts(H);
      const ActionMatrix inbag = rows_by_counts(m, counts);
      if (single_class(inbag)) continue;
      try {
        const FittedModel f =
            fit_learner(inbag, lc, mix_seed(seed, b, kSaltImportance + attempt));
        draws[b] = extract(f);
      } catch (const PrsError&) {
        continue;
      }
      break;
    }
  });

  std::vector<ImportanceRow> rows(K);
  for (int k = 0; k < K; ++k) {
    rows[k].feature = m.spec.columns[k];
    rows[k].estimate = point[k];
    if (model.kind == ModelKind::Cloglog) {
      const auto col = m.X.col(k);
      const double mu = col.mean();
      const double sd =
          std::sqrt((col.array() - mu).square().sum() / (H - 1));
      rows[k].std_estimate = point[k] * sd;
    } else {
      rows[k].std_estimate = point[k];
    }
    std::vector<double> vals(B);
    for (int b = 0; b < B; ++b) vals[b] = draws[b][k];
    std::sort(vals.begin(), vals.end());
    const double alpha = (1.0 - level) / 2.0;
    rows[k].ci_low = quantile_sorted(vals, alpha);
    rows[k].ci_high = quantile_sorted(vals, 1.0 - alpha);
  }
  return rows;
}

}  // namespace prs
