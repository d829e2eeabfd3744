// Wall-clock comparison of the serial reference path against the OpenMP
// kernels for the two bootstrap-heavy stages, with an equality check so a
// timing run doubles as a determinism check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "prs/bootstrap_eval.hpp"
#include "prs/inference.hpp"
#include "prs/parallel.hpp"

using namespace prs;

namespace {

double run_ms(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

bool same(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool na = std::isnan(a[i]), nb = std::isnan(b[i]);
    if (na != nb) return false;
    if (!na && a[i] != b[i]) return false;
  }
  return true;
}

void report(const char* label, double serial_ms, double omp_ms, bool equal) {
  std::printf("%-28s serial %9.1f ms   openmp %9.1f ms   speedup %.2fx   "
              "identical: %s\n",
              label, serial_ms, omp_ms, serial_ms / omp_ms,
              equal ? "yes" : "NO");
}

}  // namespace

int main() {
  SynthConfig sc;
  sc.seed = 99;
  sc.n_teams = 2;
  sc.players_per_team = 15;
  sc.actions_per_team = 450;
  const Dataset raw = generate_synthetic(sc);
  const Dataset ds = filter_dataset(raw, 10);
  const ActionMatrix league = build_features(ds.actions, FeatureSpec::xga());

  std::vector<WorthProblem> problems;
  for (const auto& team : ds.team_ids())
    problems.push_back(build_worth_problem(ds, team));

  std::printf("league: %d actions, %zu teams, %d threads available\n",
              league.rows(), problems.size(), effective_threads(0));

  {
    LearnerConfig lc;
    lc.kind = ModelKind::Cloglog;
    BootstrapConfig bc;
    bc.B = 60;
    bc.base_seed = 7;
    std::map<std::string, TeamPhiMatrix> serial, omp;
    const double ts = run_ms([&] {
      serial = bootstrap_run(league, problems, lc, {}, bc, ExecMode::Serial);
    });
    const double tp = run_ms([&] {
      omp = bootstrap_run(league, problems, lc, {}, bc, ExecMode::OpenMP);
    });
    bool equal = true;
    for (const auto& [team, m] : serial)
      equal = equal && same(m.values, omp.at(team).values);
    report("bootstrap_run (cloglog)", ts, tp, equal);
  }

  {
    LearnerConfig lc;
    lc.kind = ModelKind::Gbt;
    lc.gbt.rounds = 40;
    BootstrapConfig bc;
    bc.B = 20;
    bc.base_seed = 7;
    std::map<std::string, TeamPhiMatrix> serial, omp;
    const double ts = run_ms([&] {
      serial = bootstrap_run(league, problems, lc, {}, bc, ExecMode::Serial);
    });
    const double tp = run_ms([&] {
      omp = bootstrap_run(league, problems, lc, {}, bc, ExecMode::OpenMP);
    });
    bool equal = true;
    for (const auto& [team, m] : serial)
      equal = equal && same(m.values, omp.at(team).values);
    report("bootstrap_run (gbt)", ts, tp, equal);
  }

  {
    LearnerConfig lc;
    lc.kind = ModelKind::Cloglog;
    OobEval serial, omp;
    const double ts = run_ms(
        [&] { serial = oob_bootstrap_eval(league, lc, 60, 7, ExecMode::Serial); });
    const double tp = run_ms(
        [&] { omp = oob_bootstrap_eval(league, lc, 60, 7, ExecMode::OpenMP); });
    bool equal = serial.replications.size() == omp.replications.size();
    for (std::size_t i = 0; equal && i < serial.replications.size(); ++i)
      equal = serial.replications[i].auc == omp.replications[i].auc &&
              serial.replications[i].brier == omp.replications[i].brier;
    report("oob_bootstrap_eval", ts, tp, equal);
  }

  return 0;
}
