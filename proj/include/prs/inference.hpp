#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prs/bootstrap_eval.hpp"
#include "prs/coalition.hpp"
#include "prs/shapley.hpp"

namespace prs {

struct BootstrapConfig {
  int B = 1000;
  std::uint64_t base_seed = 1;
  bool refit_model = true;  // false reuses the point-estimate model per draw
  int retry_limit = 5;
  double ci_level = 0.90;
};

// Everything about one team's attribution problem that stays fixed across
// bootstrap replications: the coalition registry, per-player supports with
// precomputed weights, and the synthetic design rows for unobserved worths.
struct WorthProblem {
  Roster roster;
  int n_weights = 0;  // n in the weight formula (roster size unless overridden)
  std::vector<std::uint64_t> ids;  // all coalitions, sorted; ids[0] == 0
  std::vector<int> id_kind;        // 0 empty, 1 observed, 2 unobserved
  std::vector<std::vector<int>> obs_rows;  // per id: indices into ds.actions
  std::vector<int> synth_row;              // per id: row in synth_matrix or -1
  ActionMatrix synth_matrix;

  struct SupportRef {
    double weight = 0.0;
    int idx_without = -1;  // index into ids of C
    int idx_with = -1;     // index into ids of C + {player}
  };
  std::vector<std::vector<SupportRef>> supports;  // per roster player
  std::vector<int> action_count;                  // participations per player

  int index_of_id(std::uint64_t mask) const;  // -1 if absent
};

WorthProblem build_worth_problem(const Dataset& ds, const std::string& team_id,
                                 std::optional<int> n_override = {});

// Worth of every problem.ids entry given in-sample league predictions and
// synthetic-row predictions.  counts, when present, weights each action by
// its bootstrap multiplicity (a coalition drawn zero times is worth 0).
std::vector<double> worth_values(const WorthProblem& problem,
                                 std::span<const double> p_league,
                                 std::span<const double> p_synth,
                                 const std::vector<int>* counts,
                                 const WorthOptions& opts);

// Restricted Shapley attribution from precompiled support references.
std::vector<std::optional<double>> evaluate_phi(
    const WorthProblem& problem, std::span<const double> worths);

// Replication-major attribution matrix for one team; values[b * n + i] is
// player i's phi in replication b, NaN when missing.
struct TeamPhiMatrix {
  int B = 0;
  int n = 0;
  std::vector<double> values;
  std::vector<int> missing_per_player;
  int failed_replications = 0;
};

// League-wide bootstrap: each replication resamples the filtered action set
// with replacement, refits the model on the drawn multiset (unless
// refit_model is false, which reuses base_model), re-predicts every original
// action and the fixed synthetic rows, and re-evaluates every team's phi.
// Observed worths weight in-sample predictions by draw multiplicity.  A
// failed replication (fit error or single-class draw) is retried with a
// perturbed sub-seed up to retry_limit times, then recorded as missing for
// all teams.  Deterministic in (base_seed, B); Serial and OpenMP bitwise
// identical.
std::map<std::string, TeamPhiMatrix> bootstrap_run(
    const ActionMatrix& league, std::span<const WorthProblem> problems,
    const LearnerConfig& learner, const WorthOptions& wopts,
    const BootstrapConfig& cfg, ExecMode exec = ExecMode::Serial,
    const FittedModel* base_model = nullptr);

// Single-team convenience wrapper.
TeamPhiMatrix bootstrap_phi(const ActionMatrix& league,
                            const WorthProblem& problem,
                            const LearnerConfig& learner,
                            const WorthOptions& wopts,
                            const BootstrapConfig& cfg,
                            ExecMode exec = ExecMode::Serial,
                            const FittedModel* base_model = nullptr);

// Percentile interval of the level's tail mass split equally; values must
// hold at least two finite entries, level in (0, 1).
std::pair<double, double> percentile_ci(std::span<const double> values,
                                        double level);

struct PrsRow {
  std::string player_id;
  Role role = Role::MID;
  int actions = 0;
  double phi_hat = 0.0;
  double boot_mean = 0.0;
  double se = 0.0;
  std::optional<double> prs;  // phi_hat / se; empty when se degenerates
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool degenerate = false;
  int missing_replications = 0;
};

// Normalizes point attributions by their bootstrap standard error (divisor
// B - 1 over the non-missing replications).  Rows sort by PRS descending,
// degenerate rows last, ties by player id.  Players whose phi_hat is missing
// (empty support) are omitted.
std::vector<PrsRow> prs_table(const WorthProblem& problem, const Dataset& ds,
                              std::span<const std::optional<double>> phi_hat,
                              const TeamPhiMatrix& boot,
                              const BootstrapConfig& cfg);

struct EfficiencyRow {
  std::string player_id;
  double g90 = 0.0;
  double xg90 = 0.0;
  double diff = 0.0;  // g90 - xg90
};

struct EfficiencyResult {
  std::vector<EfficiencyRow> rows;
  std::vector<std::string> excluded_no_minutes;
};

// Goals versus expected goals per 90 minutes.  xG sums the XG-mode model's
// probability of each of the player's shots (as shooter) over the filtered
// actions; players without minutes are excluded and listed.
EfficiencyResult efficiency_metric(const Dataset& ds,
                                   const FittedModel& xg_model,
                                   const std::string& team_id);

}  // namespace prs
