#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "prs/dataset.hpp"
#include "prs/error.hpp"
#include "prs/features.hpp"
#include "prs/gbt.hpp"
#include "prs/metrics.hpp"
#include "prs/model.hpp"
#include "test_support.hpp"

using namespace prs;
using namespace prs::testsupport;

namespace {

// One separable numeric feature: y = 1 iff x > 0.5.
ActionMatrix separable(int n) {
  std::vector<std::vector<double>> rows;
  std::vector<int> y;
  for (int i = 0; i < n; ++i) {
    const double x = (i + 0.5) / n;
    rows.push_back({x});
    y.push_back(x > 0.5 ? 1 : 0);
  }
  return make_matrix(rows, y);
}

int tree_depth(const GbtTree& t, int node) {
  if (t.nodes[node].leaf) return 0;
  return 1 + std::max(tree_depth(t, t.nodes[node].left),
                      tree_depth(t, t.nodes[node].right));
}

}  // namespace

TEST_CASE("zero rounds yield the constant prevalence predictor") {
  ActionMatrix m = separable(40);
  GbtConfig cfg;
  cfg.rounds = 0;
  FittedModel fit = fit_gbt(m, cfg);
  const auto p = predict_proba(fit, m);
  for (double v : p) CHECK(v == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fit.threshold == doctest::Approx(0.5));
}

TEST_CASE("a separable feature is learned to AUC 1 within ten rounds") {
  ActionMatrix m = separable(80);
  GbtConfig cfg;
  cfg.rounds = 10;
  cfg.subsample = 1.0;
  cfg.min_leaf = 5;
  FittedModel fit = fit_gbt(m, cfg);
  const auto p = predict_proba(fit, m);
  std::vector<int> y(m.y.data(), m.y.data() + m.rows());
  MetricReport r = evaluate_metrics(y, p, 0.5);
  CHECK(r.auc == doctest::Approx(1.0));
}

TEST_CASE("training is deterministic in the seed") {
  SynthConfig scfg;
  scfg.seed = 21;
  scfg.actions_per_team = 250;
  Dataset ds = generate_synthetic(scfg);
  ActionMatrix m = build_features(ds.actions, FeatureSpec::xga());

  GbtConfig cfg;
  cfg.rounds = 25;
  cfg.seed = 77;
  FittedModel a = fit_gbt(m, cfg);
  FittedModel b = fit_gbt(m, cfg);
  const auto pa = predict_proba(a, m);
  const auto pb = predict_proba(b, m);
  for (std::size_t i = 0; i < pa.size(); ++i) CHECK(pa[i] == pb[i]);

  cfg.seed = 78;
  FittedModel c = fit_gbt(m, cfg);
  const auto pc = predict_proba(c, m);
  bool any_diff = false;
  for (std::size_t i = 0; i < pa.size(); ++i)
    if (pa[i] != pc[i]) any_diff = true;
  CHECK(any_diff);  // row subsampling makes seeds matter
}

TEST_CASE("trees respect the depth cap") {
  SynthConfig scfg;
  scfg.seed = 4;
  scfg.actions_per_team = 200;
  Dataset ds = generate_synthetic(scfg);
  ActionMatrix m = build_features(ds.actions, FeatureSpec::xga());
  GbtConfig cfg;
  cfg.rounds = 15;
  cfg.max_depth = 2;
  FittedModel fit = fit_gbt(m, cfg);
  REQUIRE(fit.gbt.trees.size() == 15);
  for (const auto& t : fit.gbt.trees) CHECK(tree_depth(t, 0) <= 2);
}

TEST_CASE("constant features leave the prediction at prevalence") {
  std::vector<std::vector<double>> rows(60, {1.0, 2.0});
  std::vector<int> y(60, 0);
  for (int i = 0; i < 21; ++i) y[i] = 1;
  ActionMatrix m = make_matrix(rows, y);
  GbtConfig cfg;
  cfg.rounds = 5;
  cfg.subsample = 1.0;
  FittedModel fit = fit_gbt(m, cfg);
  CHECK(fit.train_meta.degenerate_splits >= 5);
  const auto p = predict_proba(fit, m);
  for (double v : p) CHECK(v == doctest::Approx(21.0 / 60.0).epsilon(1e-12));
}

TEST_CASE("invalid configurations and degenerate data are rejected") {
  auto code_of = [](const std::function<void()>& fn) {
    try {
      fn();
    } catch (const PrsError& e) {
      return std::string(e.code());
    }
    return std::string("<no throw>");
  };
  ActionMatrix m = separable(30);

  GbtConfig bad;
  bad.rounds = -1;
  CHECK(code_of([&] { fit_gbt(m, bad); }) == "BadValue");
  bad = {};
  bad.max_depth = 0;
  CHECK(code_of([&] { fit_gbt(m, bad); }) == "BadValue");
  bad = {};
  bad.subsample = 0.0;
  CHECK(code_of([&] { fit_gbt(m, bad); }) == "BadValue");
  bad = {};
  bad.subsample = 1.5;
  CHECK(code_of([&] { fit_gbt(m, bad); }) == "BadValue");
  bad = {};
  bad.min_leaf = 20;  // needs 40 rows, only 30 present
  CHECK(code_of([&] { fit_gbt(m, bad); }) == "BadValue");
  bad = {};
  bad.learning_rate = 0.0;
  CHECK(code_of([&] { fit_gbt(m, bad); }) == "BadValue");

  std::vector<std::vector<double>> rows(40, {0.0});
  for (int i = 0; i < 40; ++i) rows[i][0] = i;
  CHECK(code_of([&] {
          fit_gbt(make_matrix(rows, std::vector<int>(40, 1)));
        }) == "SingleClass");
}

TEST_CASE("boosted models survive the JSON round trip bitwise") {
  SynthConfig scfg;
  scfg.seed = 13;
  scfg.actions_per_team = 220;
  Dataset ds = generate_synthetic(scfg);
  ActionMatrix m = build_features(ds.actions, FeatureSpec::xga());
  GbtConfig cfg;
  cfg.rounds = 12;
  cfg.seed = 5;
  FittedModel fit = fit_gbt(m, cfg);

  TempDir tmp("gbtjson");
  save_model(tmp.file("model.json"), fit);
  FittedModel back = load_model(tmp.file("model.json"));
  CHECK(back.kind == ModelKind::Gbt);
  CHECK(back.gbt.base_score == fit.gbt.base_score);
  REQUIRE(back.gbt.trees.size() == fit.gbt.trees.size());
  const auto p0 = predict_proba(fit, m);
  const auto p1 = predict_proba(back, m);
  for (std::size_t i = 0; i < p0.size(); ++i) CHECK(p0[i] == p1[i]);
}
