#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "prs/error.hpp"
#include "prs/metrics.hpp"
#include "prs/model.hpp"
#include "prs/rng.hpp"
#include "test_support.hpp"

using namespace prs;
using namespace prs::testsupport;

TEST_CASE("a perfect predictor maxes every metric") {
  std::vector<int> y = {1, 0, 1, 0, 1, 0, 0, 0};
  std::vector<double> p;
  for (int v : y) p.push_back(v ? 0.9 : 0.1);
  MetricReport r = evaluate_metrics(y, p, 0.5);
  CHECK(r.tp == 3);
  CHECK(r.tn == 5);
  CHECK(r.fp == 0);
  CHECK(r.fn == 0);
  CHECK(r.sensitivity == 1.0);
  CHECK(r.specificity == 1.0);
  CHECK(r.precision == 1.0);
  CHECK(r.f1 == 1.0);
  CHECK(r.mcc == doctest::Approx(1.0));
  CHECK(r.auc == 1.0);
  CHECK(r.brier == doctest::Approx(0.01));
  CHECK_FALSE(r.degenerate);
}

TEST_CASE("a constant coin on balanced data hits the known fixed points") {
  std::vector<int> y = {1, 0, 1, 0};
  std::vector<double> p(4, 0.5);
  MetricReport r = evaluate_metrics(y, p, 0.5);
  // p >= tau classifies everything positive.
  CHECK(r.sensitivity == 1.0);
  CHECK(r.specificity == 0.0);
  CHECK(r.auc == 0.5);
  CHECK(r.brier == doctest::Approx(0.25));
  CHECK(r.mcc == 0.0);
  CHECK(r.degenerate);  // the MCC denominator vanishes
}

TEST_CASE("a mixed confusion matrix is scored by hand") {
  std::vector<int> y = {1, 0, 1, 0};
  std::vector<double> p = {0.9, 0.8, 0.4, 0.2};
  MetricReport r = evaluate_metrics(y, p, 0.5);
  CHECK(r.tp == 1);
  CHECK(r.fp == 1);
  CHECK(r.fn == 1);
  CHECK(r.tn == 1);
  CHECK(r.sensitivity == doctest::Approx(0.5));
  CHECK(r.specificity == doctest::Approx(0.5));
  CHECK(r.precision == doctest::Approx(0.5));
  CHECK(r.f1 == doctest::Approx(0.5));
  CHECK(r.mcc == doctest::Approx(0.0));
  CHECK(r.auc == doctest::Approx(0.75));  // 3 of 4 pairs ordered correctly
  CHECK(r.brier == doctest::Approx((0.01 + 0.64 + 0.36 + 0.04) / 4.0));
}

TEST_CASE("tied scores earn half credit in the AUC") {
  std::vector<int> y = {1, 0};
  std::vector<double> p = {0.5, 0.5};
  CHECK(evaluate_metrics(y, p, 0.5).auc == doctest::Approx(0.5));

  // One tie among informative scores: pairs are (1>0)=1, (tie)=0.5,
  // (1>0)=1, (1>0)=1 out of 4.
  std::vector<int> y2 = {1, 1, 0, 0};
  std::vector<double> p2 = {0.9, 0.4, 0.4, 0.1};
  CHECK(evaluate_metrics(y2, p2, 0.5).auc == doctest::Approx(0.875));
}

TEST_CASE("single-class labels degrade gracefully") {
  std::vector<int> y = {1, 1, 1};
  std::vector<double> p = {0.2, 0.5, 0.9};
  MetricReport r = evaluate_metrics(y, p, 0.5);
  CHECK(r.auc == 0.5);
  CHECK(r.degenerate);
}

TEST_CASE("inputs are validated") {
  auto code_of = [](const std::function<void()>& fn) {
    try {
      fn();
    } catch (const PrsError& e) {
      return std::string(e.code());
    }
    return std::string("<no throw>");
  };
  std::vector<int> y = {1, 0};
  std::vector<double> p = {0.5, 0.5};
  CHECK(code_of([&] { evaluate_metrics(y, std::vector<double>{0.5}, 0.5); }) ==
        "BadValue");
  CHECK(code_of([&] { evaluate_metrics(y, p, 0.0); }) == "BadValue");
  CHECK(code_of([&] { evaluate_metrics(y, p, 1.0); }) == "BadValue");
  CHECK(code_of([&] {
          evaluate_metrics(std::vector<int>{}, std::vector<double>{}, 0.5);
        }) == "BadValue");
  CHECK(code_of([&] { classify(p, 0.0); }) == "BadValue");

  const auto labels = classify(std::vector<double>{0.3, 0.5, 0.7}, 0.5);
  CHECK(labels == std::vector<int>{0, 1, 1});  // boundary counts as positive
}

TEST_CASE("independent columns have variance inflation near one") {
  Rng rng(91);
  std::vector<std::vector<double>> rows;
  std::vector<int> y;
  for (int i = 0; i < 400; ++i) {
    rows.push_back({rng.normal(), rng.normal(), rng.normal()});
    y.push_back(i % 5 == 0 ? 1 : 0);
  }
  VifResult r = compute_vif(make_matrix(rows, y));
  REQUIRE(r.vif.size() == 3);
  for (int j = 0; j < 3; ++j) {
    CHECK(r.status[j] == VifStatus::Ok);
    CHECK(r.vif[j] > 0.9);
    CHECK(r.vif[j] < 1.2);
  }
}

TEST_CASE("a duplicated column is reported as exactly collinear") {
  Rng rng(14);
  std::vector<std::vector<double>> rows;
  std::vector<int> y;
  for (int i = 0; i < 100; ++i) {
    const double a = rng.normal();
    rows.push_back({a, a, rng.normal()});
    y.push_back(0);
  }
  VifResult r = compute_vif(make_matrix(rows, y));
  CHECK(std::isinf(r.vif[0]));
  CHECK(std::isinf(r.vif[1]));
  CHECK(r.status[0] == VifStatus::ExactCollinear);
  CHECK(r.status[1] == VifStatus::ExactCollinear);
  CHECK(r.status[2] == VifStatus::Ok);
  CHECK(r.vif[2] < 1.2);
}

TEST_CASE("correlated columns inflate as the regression formula says") {
  // x2 = x1 + noise with var(x1) = 1, var(noise) = 0.25: R^2 of x1 on x2 is
  // 1 / 1.25 = 0.8, so VIF = 5 for both columns (up to sampling noise).
  Rng rng(5);
  std::vector<std::vector<double>> rows;
  std::vector<int> y;
  for (int i = 0; i < 20000; ++i) {
    const double a = rng.normal();
    rows.push_back({a, a + rng.normal(0.0, 0.5)});
    y.push_back(0);
  }
  VifResult r = compute_vif(make_matrix(rows, y));
  CHECK(r.vif[0] == doctest::Approx(5.0).epsilon(0.1));
  CHECK(r.vif[1] == doctest::Approx(5.0).epsilon(0.1));
}

TEST_CASE("constant columns and tiny designs are rejected") {
  auto code_of = [](const std::function<void()>& fn) {
    try {
      fn();
    } catch (const PrsError& e) {
      return std::string(e.code());
    }
    return std::string("<no throw>");
  };
  std::vector<std::vector<double>> rows;
  std::vector<int> y;
  for (int i = 0; i < 50; ++i) {
    rows.push_back({1.0, static_cast<double>(i)});
    y.push_back(0);
  }
  CHECK(code_of([&] { compute_vif(make_matrix(rows, y)); }) ==
        "ConstantColumn");

  std::vector<std::vector<double>> one_col;
  for (int i = 0; i < 50; ++i) one_col.push_back({static_cast<double>(i)});
  CHECK(code_of([&] {
          compute_vif(make_matrix(one_col, std::vector<int>(50, 0)));
        }) == "BadValue");
}
