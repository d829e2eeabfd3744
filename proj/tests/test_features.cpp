#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "prs/error.hpp"
#include "prs/features.hpp"
#include "test_support.hpp"

using namespace prs;
using namespace prs::testsupport;

TEST_CASE("feature specs expose the documented column sets") {
  const FeatureSpec xg = FeatureSpec::xg();
  CHECK(xg.mode == FeatureMode::XG);
  CHECK(xg.columns == std::vector<std::string>{"x", "y", "shot_angle"});

  const FeatureSpec xga = FeatureSpec::xga();
  CHECK(xga.mode == FeatureMode::XGA);
  CHECK(xga.k() == 13);
  const std::vector<std::string> expected = {
      "x",        "y",          "shot_angle",        "first_pass_x",
      "first_pass_y", "pass_nb", "players_nb",       "avg_pass_distance",
      "pl_performance_index",    "h_a_home",         "situation_free_kick",
      "situation_penalty",       "situation_other"};
  CHECK(xga.columns == expected);

  // The shot-only design is always a prefix of the full design.
  for (int i = 0; i < xg.k(); ++i) CHECK(xg.columns[i] == xga.columns[i]);

  CHECK(parse_feature_mode("xg") == FeatureMode::XG);
  CHECK(parse_feature_mode("xga") == FeatureMode::XGA);
  CHECK(feature_mode_token(FeatureMode::XGA) == "xga");
}

TEST_CASE("encoding fills numeric columns and dummy codes the context") {
  ShotAction a = make_action("a1", "T", "PA", {"PA", "PB"}, 1);
  a.x = 90.5;
  a.y = 44.0;
  a.shot_angle = 31.0;
  a.first_pass_x = 55.0;
  a.first_pass_y = 62.0;
  a.pass_nb = 3;
  a.players_nb = 2;
  a.avg_pass_distance = 12.5;
  a.pl_performance_index = 58.0;
  a.h_a = Venue::Away;
  a.situation = Situation::Penalty;

  ShotAction b = make_action("a2", "T", "PA", {"PA"}, 0);
  b.h_a = Venue::Home;
  b.situation = Situation::OpenPlay;

  ActionMatrix m = build_features(std::vector<ShotAction>{a, b},
                                  FeatureSpec::xga());
  REQUIRE(m.rows() == 2);
  REQUIRE(m.cols() == 13);
  CHECK(m.row_keys == std::vector<std::string>{"a1", "a2"});
  CHECK(m.y(0) == 1);
  CHECK(m.y(1) == 0);

  CHECK(m.X(0, 0) == 90.5);
  CHECK(m.X(0, 1) == 44.0);
  CHECK(m.X(0, 2) == 31.0);
  CHECK(m.X(0, 3) == 55.0);
  CHECK(m.X(0, 4) == 62.0);
  CHECK(m.X(0, 5) == 3.0);
  CHECK(m.X(0, 6) == 2.0);
  CHECK(m.X(0, 7) == 12.5);
  CHECK(m.X(0, 8) == 58.0);
  CHECK(m.X(0, 9) == 0.0);   // away
  CHECK(m.X(0, 10) == 0.0);  // free kick
  CHECK(m.X(0, 11) == 1.0);  // penalty
  CHECK(m.X(0, 12) == 0.0);  // other

  // Open play at home is the all-zero context (reference level).
  CHECK(m.X(1, 9) == 1.0);
  CHECK(m.X(1, 10) == 0.0);
  CHECK(m.X(1, 11) == 0.0);
  CHECK(m.X(1, 12) == 0.0);
}

TEST_CASE("the XG design equals the first three XGA columns bit for bit") {
  std::vector<ShotAction> actions;
  for (int i = 0; i < 25; ++i) {
    ShotAction a = make_action("a" + std::to_string(i), "T", "PA", {"PA"});
    a.x = 60.0 + i * 1.3;
    a.y = 30.0 + i * 0.7;
    a.shot_angle = 5.0 + i;
    a.situation = (i % 4 == 0) ? Situation::FreeKick : Situation::OpenPlay;
    actions.push_back(a);
  }
  ActionMatrix xg = build_features(actions, FeatureSpec::xg());
  ActionMatrix xga = build_features(actions, FeatureSpec::xga());
  REQUIRE(xg.cols() == 3);
  for (int r = 0; r < xg.rows(); ++r)
    for (int c = 0; c < 3; ++c) CHECK(xg.X(r, c) == xga.X(r, c));
}

TEST_CASE("non-finite features and custom mode are rejected") {
  ShotAction a = make_action("a1", "T", "PA", {"PA"});
  a.x = std::nan("");
  std::string code;
  try {
    build_features(std::vector<ShotAction>{a}, FeatureSpec::xga());
  } catch (const PrsError& e) {
    code = e.code();
  }
  CHECK(code == "BadValue");

  code.clear();
  try {
    build_features(std::vector<ShotAction>{make_action("a1", "T", "PA", {"PA"})},
                   FeatureSpec::custom({"c0"}));
  } catch (const PrsError& e) {
    code = e.code();
  }
  CHECK(code == "BadConfig");
}
