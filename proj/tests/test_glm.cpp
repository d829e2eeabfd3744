#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "prs/dataset.hpp"
#include "prs/error.hpp"
#include "prs/features.hpp"
#include "prs/glm.hpp"
#include "prs/model.hpp"
#include "test_support.hpp"

using namespace prs;
using namespace prs::testsupport;

namespace {

ActionMatrix intercept_only(int n, int ones) {
  std::vector<std::vector<double>> rows(n, std::vector<double>{});
  std::vector<int> y(n, 0);
  for (int i = 0; i < ones; ++i) y[i] = 1;
  return make_matrix(rows, y);
}

}  // namespace

TEST_CASE("intercept-only fit solves the closed form exactly") {
  ActionMatrix m = intercept_only(100, 10);
  FittedModel fit = fit_cloglog(m);
  REQUIRE(fit.glm.coefficients.size() == 1);
  // mu = 1 - exp(-exp(b0)) = 0.1  =>  b0 = log(-log(0.9))
  const double expected = std::log(-std::log(0.9));
  CHECK(std::abs(fit.glm.coefficients[0] - expected) < 1e-8);
  CHECK(fit.threshold == doctest::Approx(0.1));
  CHECK(fit.train_meta.converged);

  const auto p = predict_proba(fit, m);
  for (double v : p) CHECK(std::abs(v - 0.1) < 1e-8);
}

TEST_CASE("coefficients recover the synthetic generator's truth") {
  SynthConfig cfg;
  cfg.seed = 1;
  cfg.actions_per_team = 2500;
  Dataset ds = generate_synthetic(cfg);
  ActionMatrix m = build_features(ds.actions, FeatureSpec::xga());
  FittedModel fit = fit_cloglog(m);
  REQUIRE(fit.glm.coefficients.size() == 14);
  REQUIRE(fit.glm.std_errors.size() == 14);

  const auto& truth = synthetic_truth_coefficients();
  for (int j = 0; j < 13; ++j) {
    const std::string& col = m.spec.columns[j];
    const double beta = fit.glm.coefficients[j + 1];
    const double se = fit.glm.std_errors[j + 1];
    REQUIRE(std::isfinite(beta));
    REQUIRE(se > 0.0);
    const double target = truth.at(col);
    CHECK(std::abs(beta - target) < 3.0 * se);
  }
}

TEST_CASE("a zero-extended fit reproduces the prefix model bit for bit") {
  SynthConfig cfg;
  cfg.seed = 3;
  cfg.actions_per_team = 300;
  Dataset ds = generate_synthetic(cfg);
  ActionMatrix xg = build_features(ds.actions, FeatureSpec::xg());
  ActionMatrix xga = build_features(ds.actions, FeatureSpec::xga());

  FittedModel fit_xg = fit_cloglog(xg);
  FittedModel widened = fit_xg;
  widened.spec = xga.spec;
  widened.glm.coefficients.resize(14, 0.0);
  widened.glm.std_errors.resize(14, 0.0);

  const auto p_narrow = predict_proba(fit_xg, xg);
  const auto p_wide = predict_proba(widened, xga);
  REQUIRE(p_narrow.size() == p_wide.size());
  for (std::size_t i = 0; i < p_narrow.size(); ++i)
    CHECK(p_narrow[i] == p_wide[i]);
}

TEST_CASE("perfect separation is flagged but the fit still returns") {
  std::vector<std::vector<double>> rows;
  std::vector<int> y;
  for (int i = 0; i < 30; ++i) {
    rows.push_back({i < 15 ? -1.0 - i * 0.1 : 1.0 + i * 0.1});
    y.push_back(i < 15 ? 0 : 1);
  }
  FittedModel fit = fit_cloglog(make_matrix(rows, y));
  CHECK(fit.train_meta.separation_detected);
  CHECK(std::isfinite(fit.glm.coefficients[1]));
}

TEST_CASE("an exactly collinear design engages the jitter fallback") {
  std::vector<std::vector<double>> rows;
  std::vector<int> y;
  for (int i = 0; i < 60; ++i) {
    const double v = std::sin(i * 0.7);
    rows.push_back({v, v});  // duplicated column
    y.push_back((i * 7 % 10) < 3 ? 1 : 0);
  }
  FittedModel fit = fit_cloglog(make_matrix(rows, y));
  CHECK(fit.train_meta.hessian_jitter_applied);
  CHECK(fit.train_meta.hessian_jitter > 0.0);
  for (double c : fit.glm.coefficients) CHECK(std::isfinite(c));
}

TEST_CASE("degenerate inputs are rejected") {
  std::string code;
  try {
    fit_cloglog(intercept_only(50, 0));
  } catch (const PrsError& e) {
    code = e.code();
  }
  CHECK(code == "SingleClass");

  code.clear();
  try {
    ActionMatrix tiny = make_matrix({{0.0}, {1.0}}, {0, 1});
    fit_cloglog(tiny);
  } catch (const PrsError& e) {
    code = e.code();
  }
  CHECK(code == "BadValue");

  code.clear();
  try {
    CloglogConfig cfg;
    cfg.ridge = -1.0;
    fit_cloglog(intercept_only(50, 10), cfg);
  } catch (const PrsError& e) {
    code = e.code();
  }
  CHECK(code == "BadValue");
}

TEST_CASE("ridge shrinks slopes but never the intercept") {
  std::vector<std::vector<double>> rows;
  std::vector<int> y;
  for (int i = 0; i < 200; ++i) {
    const double v = (i % 20) / 10.0 - 1.0;
    rows.push_back({v});
    y.push_back((v > 0 && i % 3 != 0) || i % 11 == 0 ? 1 : 0);
  }
  ActionMatrix m = make_matrix(rows, y);
  CloglogConfig plain;
  CloglogConfig heavy;
  heavy.ridge = 1e4;
  FittedModel f0 = fit_cloglog(m, plain);
  FittedModel f1 = fit_cloglog(m, heavy);
  CHECK(std::abs(f1.glm.coefficients[1]) < std::abs(f0.glm.coefficients[1]));
  CHECK(std::abs(f1.glm.coefficients[1]) < 1e-2);

  // With the slope pinned at zero the intercept must still hit the closed
  // form for the marginal prevalence.
  double ybar = 0.0;
  for (int v : y) ybar += v;
  ybar /= y.size();
  CHECK(std::abs(f1.glm.coefficients[0] - std::log(-std::log1p(-ybar))) <
        1e-3);
}

TEST_CASE("fitted models survive the JSON round trip bitwise") {
  SynthConfig cfg;
  cfg.seed = 9;
  cfg.actions_per_team = 200;
  Dataset ds = generate_synthetic(cfg);
  ActionMatrix m = build_features(ds.actions, FeatureSpec::xga());
  FittedModel fit = fit_cloglog(m);

  TempDir tmp("glmjson");
  save_model(tmp.file("model.json"), fit);
  FittedModel back = load_model(tmp.file("model.json"));
  CHECK(back.kind == fit.kind);
  CHECK(back.spec == fit.spec);
  CHECK(back.threshold == fit.threshold);
  REQUIRE(back.glm.coefficients.size() == fit.glm.coefficients.size());
  for (std::size_t i = 0; i < fit.glm.coefficients.size(); ++i) {
    CHECK(back.glm.coefficients[i] == fit.glm.coefficients[i]);
    CHECK(back.glm.std_errors[i] == fit.glm.std_errors[i]);
  }
  const auto p0 = predict_proba(fit, m);
  const auto p1 = predict_proba(back, m);
  for (std::size_t i = 0; i < p0.size(); ++i) CHECK(p0[i] == p1[i]);
}

TEST_CASE("prediction validates the feature schema") {
  ActionMatrix m = intercept_only(60, 12);
  FittedModel fit = fit_cloglog(m);
  ActionMatrix other = make_matrix({{1.0}, {2.0}}, {0, 1});
  std::string code;
  try {
    predict_proba(fit, other);
  } catch (const PrsError& e) {
    code = e.code();
  }
  CHECK(code == "SchemaMismatch");
}
