#include "prs/inference.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "prs/rng.hpp"
#include "prs/stats.hpp"

namespace prs {

int WorthProblem::index_of_id(std::uint64_t mask) const {
  const auto it = std::lower_bound(ids.begin(), ids.end(), mask);
  if (it == ids.end() || *it != mask) return -1;
  return static_cast<int>(it - ids.begin());
}

WorthProblem build_worth_problem(const Dataset& ds, const std::string& team_id,
                                 std::optional<int> n_override) {
  WorthProblem problem;
  const CoalitionMap map = extract_coalitions(ds, team_id);
  problem.roster = map.roster;

  int max_card = 0;
  for (const auto& [mask, rows] : map.actions_by_coalition)
    max_card = std::max(max_card, std::popcount(mask));
  problem.n_weights = n_override.value_or(problem.roster.n());
  if (problem.n_weights < std::max(max_card, problem.roster.n()))
    throw PrsError("BadConfig",
                   "n_override must be at least the roster size");

  const std::vector<std::uint64_t> unobs = compatible_unobserved(map);
  problem.ids.push_back(0);
  for (const auto& [mask, rows] : map.actions_by_coalition)
    problem.ids.push_back(mask);
  problem.ids.insert(problem.ids.end(), unobs.begin(), unobs.end());
  std::sort(problem.ids.begin(), problem.ids.end());
  problem.ids.erase(std::unique(problem.ids.begin(), problem.ids.end()),
                    problem.ids.end());

  const int n_ids = static_cast<int>(problem.ids.size());
  problem.id_kind.assign(n_ids, 0);
  problem.obs_rows.assign(n_ids, {});
  problem.synth_row.assign(n_ids, -1);

  for (int j = 0; j < n_ids; ++j) {
    const std::uint64_t mask = problem.ids[j];
    if (mask == 0) continue;
    auto it = map.actions_by_coalition.find(mask);
    if (it != map.actions_by_coalition.end()) {
      problem.id_kind[j] = 1;
      problem.obs_rows[j] = it->second;
    } else {
      problem.id_kind[j] = 2;
    }
  }

  // Synthetic design rows for the unobserved coalitions, in ids order.
  std::vector<ShotAction> synth;
  if (!unobs.empty()) {
    const TeamStats stats = team_feature_means(ds, map);
    for (int j = 0; j < n_ids; ++j)
      if (problem.id_kind[j] == 2) {
        problem.synth_row[j] = static_cast<int>(synth.size());
        synth.push_back(synth_coalition_features(problem.ids[j],
                                                 problem.roster, stats, ds));
      }
  }
  problem.synth_matrix = build_features(synth, FeatureSpec::xga());

  // Per-player supports with classical coefficients renormalized over the
  // support, precompiled to indices so replications only do table lookups.
  const int n = problem.roster.n();
  problem.supports.resize(n);
  problem.action_count.assign(n, 0);
  for (const auto& [mask, rows] : map.actions_by_coalition)
    for (int i = 0; i < n; ++i)
      if (mask & (std::uint64_t{1} << i))
        problem.action_count[i] += static_cast<int>(rows.size());

  for (int i = 0; i < n; ++i) {
    std::vector<SupportEntry> entries;
    try {
      entries = player_support(map, i);
    } catch (const PrsError& e) {
      if (e.code() == "EmptySupport") continue;  // missing, not zero
      throw;
    }
    const std::vector<double> weights =
        restricted_weights(problem.n_weights, entries);
    const std::uint64_t bit = std::uint64_t{1} << i;
    auto& refs = problem.supports[i];
    refs.reserve(entries.size());
    for (std::size_t j = 0; j < entries.size(); ++j) {
      WorthProblem::SupportRef ref;
      ref.weight = weights[j];
      ref.idx_without = problem.index_of_id(entries[j].mask);
      ref.idx_with = problem.index_of_id(entries[j].mask | bit);
      if (ref.idx_without < 0 || ref.idx_with < 0)
        throw PrsError("MissingWorth", "support coalition missing from the "
                                       "worth registry");
      refs.push_back(ref);
    }
  }
  return problem;
}

std::vector<double> worth_values(const WorthProblem& problem,
                                 std::span<const double> p_league,
                                 std::span<const double> p_synth,
                                 const std::vector<int>* counts,
                                 const WorthOptions& opts) {
  if (!(opts.scale > 0.0))
    throw PrsError("BadValue", "worth scale must be positive");
  const int n_ids = static_cast<int>(problem.ids.size());
  std::vector<double> out(n_ids, 0.0);
  for (int j = 0; j < n_ids; ++j) {
    double w = 0.0;
    if (problem.id_kind[j] == 1) {
      KahanSum sum;
      long count = 0;
      for (int row : problem.obs_rows[j]) {
        const int c = counts ? (*counts)[row] : 1;
        if (c == 0) continue;
        sum.add(static_cast<double>(c) * p_league[row]);
        count += c;
      }
      w = sum.get();
      if (opts.observed_mean && count > 0) w /= static_cast<double>(count);
    } else if (problem.id_kind[j] == 2) {
      w = p_synth[problem.synth_row[j]];
    }
    out[j] = opts.scale * w + opts.shift;
  }
  return out;
}

std::vector<std::optional<double>> evaluate_phi(
    const WorthProblem& problem, std::span<const double> worths) {
  const int n = problem.roster.n();
  std::vector<std::optional<double>> phi(n);
  for (int i = 0; i < n; ++i) {
    const auto& refs = problem.supports[i];
    if (refs.empty()) continue;
    KahanSum acc;
    for (const auto& ref : refs)
      acc.add(ref.weight * (worths[ref.idx_with] - worths[ref.idx_without]));
    phi[i] = acc.get();
  }
  return phi;
}

std::map<std::string, TeamPhiMatrix> bootstrap_run(
    const ActionMatrix& league, std::span<const WorthProblem> problems,
    const LearnerConfig& learner, const WorthOptions& wopts,
    const BootstrapConfig& cfg, ExecMode exec, const FittedModel* base_model) {
  if (cfg.B < 2) throw PrsError("BadValue", "bootstrap needs B >= 2");
  if (!cfg.refit_model && !base_model)
    throw PrsError("BadConfig",
                   "refit_model = false requires a base model to reuse");
  const int H = league.rows();
  if (H < 1) throw PrsError("EmptyResult", "empty league matrix");

  const int T = static_cast<int>(problems.size());
  std::map<std::string, TeamPhiMatrix> out;
  std::vector<TeamPhiMatrix*> slots(T);
  for (int t = 0; t < T; ++t) {
    TeamPhiMatrix& m = out[problems[t].roster.team_id];
    m.B = cfg.B;
    m.n = problems[t].roster.n();
    m.values.assign(static_cast<std::size_t>(cfg.B) * m.n,
                    std::numeric_limits<double>::quiet_NaN());
    m.missing_per_player.assign(m.n, 0);
    slots[t] = &m;
  }
  std::vector<char> failed(cfg.B, 0);

  parallel_for(static_cast<std::size_t>(cfg.B), exec, [&](std::size_t b) {
    for (int attempt = 0;; ++attempt) {
      if (attempt > cfg.retry_limit) {
        failed[b] = 1;  // row stays NaN for every team
        return;
      }
      Rng rng = Rng::stream(cfg.base_seed, b, kSaltPrs + attempt);
      const std::vector<int> counts = rng.resample_counts(H);

      FittedModel refit;
      const FittedModel* model = base_model;
      if (cfg.refit_model) {
        int total_ones = 0, total = 0;
        for (int i = 0; i < H; ++i) {
          total += counts[i];
          if (league.y(i)) total_ones += counts[i];
        }
        if (total_ones == 0 || total_ones == total) continue;
        ActionMatrix inbag;
        inbag.spec = league.spec;
        inbag.X.resize(total, league.cols());
        inbag.y.resize(total);
        int r = 0;
        for (int i = 0; i < H; ++i)
          for (int c = 0; c < counts[i]; ++c) {
            inbag.X.row(r) = league.X.row(i);
            inbag.y(r) = league.y(i);
            ++r;
          }
        try {
          refit = fit_learner(inbag, learner,
                              mix_seed(cfg.base_seed, b, kSaltPrs + attempt));
        } catch (const PrsError&) {
          continue;
        }
        model = &refit;
      }

      const std::vector<double> p_league = predict_proba(*model, league);
      for (int t = 0; t < T; ++t) {
        const WorthProblem& problem = problems[t];
        std::vector<double> p_synth;
        if (problem.synth_matrix.rows() > 0)
          p_synth = predict_proba(*model, problem.synth_matrix);
        const std::vector<double> worths =
            worth_values(problem, p_league, p_synth, &counts, wopts);
        const auto phi = evaluate_phi(problem, worths);
        for (int i = 0; i < problem.roster.n(); ++i)
          if (phi[i])
            slots[t]->values[b * problem.roster.n() + i] = *phi[i];
      }
      return;
    }
  });

  for (int t = 0; t < T; ++t) {
    TeamPhiMatrix& m = *slots[t];
    for (int b = 0; b < cfg.B; ++b)
      if (failed[b]) ++m.failed_replications;
    for (int i = 0; i < m.n; ++i) {
      int missing = 0;
      for (int b = 0; b < cfg.B; ++b)
        if (std::isnan(m.values[static_cast<std::size_t>(b) * m.n + i]))
          ++missing;
      m.missing_per_player[i] = missing;
    }
  }
  return out;
}

TeamPhiMatrix bootstrap_phi(const ActionMatrix& league,
                            const WorthProblem& problem,
                            const LearnerConfig& learner,
                            const WorthOptions& wopts,
                            const BootstrapConfig& cfg, ExecMode exec,
                            const FittedModel* base_model) {
  auto result = bootstrap_run(league, {&problem, 1}, learner, wopts, cfg, exec,
                              base_model);
  return std::move(result.at(problem.roster.team_id));
}

std::pair<double, double> percentile_ci(std::span<const double> values,
                                        double level) {
  if (!(level > 0.0 && level < 1.0))
    throw PrsError("BadValue", "confidence level must lie in (0, 1)");
  std::vector<double> finite;
  finite.reserve(values.size());
  for (double v : values)
    if (std::isfinite(v)) finite.push_back(v);
  if (finite.size() < 2)
    throw PrsError("BadValue",
                   "percentile interval needs at least two finite values");
  std::sort(finite.begin(), finite.end());
  const double alpha = (1.0 - level) / 2.0;
  return {quantile_sorted(finite, alpha), quantile_sorted(finite, 1.0 - alpha)};
}

std::vector<PrsRow> prs_table(const WorthProblem& problem, const Dataset& ds,
                              std::span<const std::optional<double>> phi_hat,
                              const TeamPhiMatrix& boot,
                              const BootstrapConfig& cfg) {
  const int n = problem.roster.n();
  if (static_cast<int>(phi_hat.size()) != n || boot.n != n)
    throw PrsError("BadValue", "phi/bootstrap shape mismatch");

  constexpr double kSeEps = 1e-12;
  std::vector<PrsRow> rows;
  for (int i = 0; i < n; ++i) {
    if (!phi_hat[i]) continue;  // empty support: missing, not zero
    PrsRow row;
    row.player_id = problem.roster.player_ids[i];
    const Player* p = ds.find_player(row.player_id);
    if (p) row.role = p->role;
    row.actions = problem.action_count[i];
    row.phi_hat = *phi_hat[i];

    std::vector<double> vals;
    vals.reserve(boot.B);
    for (int b = 0; b < boot.B; ++b) {
      const double v = boot.values[static_cast<std::size_t>(b) * n + i];
      if (std::isfinite(v)) vals.push_back(v);
    }
    row.missing_replications = boot.B - static_cast<int>(vals.size());
    if (vals.empty())
      throw PrsError("AllReplicationsMissing",
                     "no usable replication for player '" + row.player_id +
                         "'");
    row.boot_mean = mean(vals);
    if (vals.size() == 1) {
      row.se = 0.0;
      row.degenerate = true;
      row.ci_low = row.ci_high = vals[0];
    } else {
      row.se = sample_sd(vals);
      const auto ci = percentile_ci(vals, cfg.ci_level);
      row.ci_low = ci.first;
      row.ci_high = ci.second;
      if (row.se <= kSeEps) row.degenerate = true;
    }
    if (!row.degenerate) row.prs = row.phi_hat / row.se;
    rows.push_back(std::move(row));
  }

  std::sort(rows.begin(), rows.end(), [](const PrsRow& a, const PrsRow& b) {
    if (a.prs.has_value() != b.prs.has_value()) return a.prs.has_value();
    if (a.prs && b.prs && *a.prs != *b.prs) return *a.prs > *b.prs;
    return a.player_id < b.player_id;
  });
  return rows;
}

EfficiencyResult efficiency_metric(const Dataset& ds,
                                   const FittedModel& xg_model,
                                   const std::string& team_id) {
  if (xg_model.spec.mode != FeatureMode::XG)
    throw PrsError("BadConfig",
                   "efficiency requires a model fitted on XG features");

  std::vector<ShotAction> team_actions;
  for (const auto& a : ds.actions)
    if (a.team_id == team_id) team_actions.push_back(a);

  std::map<std::string, double> xg_sum;
  if (!team_actions.empty()) {
    const ActionMatrix m = build_features(team_actions, FeatureSpec::xg());
    const std::vector<double> p = predict_proba(xg_model, m);
    for (std::size_t i = 0; i < team_actions.size(); ++i)
      xg_sum[team_actions[i].shooter_id] += p[i];
  }

  EfficiencyResult out;
  for (const auto& p : ds.players) {
    if (p.team_id != team_id) continue;
    if (!(p.minutes > 0.0)) {
      out.excluded_no_minutes.push_back(p.player_id);
      continue;
    }
    EfficiencyRow row;
    row.player_id = p.player_id;
    row.g90 = 90.0 * p.goals / p.minutes;
    auto it = xg_sum.find(p.player_id);
    row.xg90 = 90.0 * (it == xg_sum.end() ? 0.0 : it->second) / p.minutes;
    row.diff = row.g90 - row.xg90;
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace prs
