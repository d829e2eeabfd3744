#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "prs/coalition.hpp"
#include "prs/error.hpp"
#include "prs/features.hpp"
#include "test_support.hpp"

using namespace prs;
using namespace prs::testsupport;

namespace {

Dataset two_team_fixture() {
  Dataset ds;
  ds.players = {
      make_player("P1", "T", Role::DEF, 40.0),
      make_player("P2", "T", Role::MID, 55.0),
      make_player("P3", "T", Role::FOR, 70.0),
      make_player("P4", "T", Role::MID, 50.0),
      make_player("Q1", "U", Role::FOR, 60.0),
  };
  ds.actions = {
      make_action("a1", "T", "P1", {"P1", "P2"}, 1),
      make_action("a2", "T", "P2", {"P1", "P2"}),
      make_action("a3", "T", "P3", {"P2", "P3"}),
      make_action("a4", "T", "P2", {"P2"}),
      make_action("b1", "U", "Q1", {"Q1"}),
  };
  return ds;
}

FittedModel flat_xga_model(double p_star) {
  FittedModel m;
  m.kind = ModelKind::Cloglog;
  m.spec = FeatureSpec::xga();
  m.threshold = p_star;
  m.glm.coefficients.assign(14, 0.0);
  m.glm.coefficients[0] = std::log(-std::log1p(-p_star));
  m.glm.std_errors.assign(14, 0.0);
  return m;
}

std::string code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const PrsError& e) {
    return std::string(e.code());
  }
  return std::string("<no throw>");
}

}  // namespace

TEST_CASE("coalition extraction is scoped to the team in roster order") {
  Dataset ds = two_team_fixture();
  CoalitionMap cm = extract_coalitions(ds, "T");
  CHECK(cm.roster.player_ids ==
        std::vector<std::string>{"P1", "P2", "P3", "P4"});
  CHECK(cm.roster.index_of("P3") == 2);
  CHECK(cm.roster.index_of("Q1") == -1);

  REQUIRE(cm.actions_by_coalition.size() == 3);
  REQUIRE(cm.actions_by_coalition.count(0b0011) == 1);
  CHECK(cm.actions_by_coalition.at(0b0011).size() == 2);
  CHECK(cm.actions_by_coalition.at(0b0110).size() == 1);
  CHECK(cm.actions_by_coalition.at(0b0010).size() == 1);
  CHECK(cm.observed(0b0011));
  CHECK_FALSE(cm.observed(0b0001));
}

TEST_CASE("player supports are the observed coalitions with the player removed") {
  Dataset ds = two_team_fixture();
  CoalitionMap cm = extract_coalitions(ds, "T");

  auto s1 = player_support(cm, 0);  // P1 appears only in {P1,P2}
  REQUIRE(s1.size() == 1);
  CHECK(s1[0].mask == 0b0010);
  CHECK(s1[0].observed);  // {P2} is itself an observed coalition

  auto s2 = player_support(cm, 1);  // P2 appears in all three
  REQUIRE(s2.size() == 3);
  CHECK(s2[0].mask == 0b0000);  // from {P2}
  CHECK_FALSE(s2[0].observed);
  CHECK(s2[1].mask == 0b0001);  // from {P1,P2}
  CHECK_FALSE(s2[1].observed);
  CHECK(s2[2].mask == 0b0100);  // from {P2,P3}
  CHECK_FALSE(s2[2].observed);

  CHECK(code_of([&] { player_support(cm, 3); }) == "EmptySupport");
  CHECK(code_of([&] { player_support(cm, 9); }) == "BadValue");
}

TEST_CASE("compatible unobserved coalitions are the non-empty novel removals") {
  Dataset ds = two_team_fixture();
  CoalitionMap cm = extract_coalitions(ds, "T");
  // {P1} and {P3} arise by removal and were never observed; {P2} was.
  CHECK(compatible_unobserved(cm) ==
        std::vector<std::uint64_t>{0b0001, 0b0100});
}

TEST_CASE("synthetic rows take membership facts from the mask and the rest from team means") {
  Dataset ds = two_team_fixture();
  CoalitionMap cm = extract_coalitions(ds, "T");
  TeamStats stats = team_feature_means(ds, cm);
  CHECK(stats.x == doctest::Approx(85.0));
  CHECK(stats.avg_pass_distance ==
        doctest::Approx((14.0 + 14.0 + 14.0 + 0.0) / 4.0));

  ShotAction row = synth_coalition_features(0b0101, cm.roster, stats, ds);
  CHECK(row.participants == std::vector<std::string>{"P1", "P3"});
  CHECK(row.players_nb == 2);
  CHECK(row.pass_nb == 1);
  CHECK(row.pl_performance_index == doctest::Approx((40.0 + 70.0) / 2.0));
  CHECK(row.x == doctest::Approx(stats.x));
  CHECK(row.h_a == Venue::Home);
  CHECK(row.situation == Situation::OpenPlay);

  ShotAction solo = synth_coalition_features(0b1000, cm.roster, stats, ds);
  CHECK(solo.players_nb == 1);
  CHECK(solo.pass_nb == 0);

  CHECK(code_of([&] {
          synth_coalition_features(0, cm.roster, stats, ds);
        }) == "BadValue");
}

TEST_CASE("worth assembles observed sums, out-of-sample rows and the empty convention") {
  Dataset ds = two_team_fixture();
  CoalitionMap cm = extract_coalitions(ds, "T");
  FittedModel model = flat_xga_model(0.1);

  WorthTable t = estimate_worth(ds, cm, model);
  REQUIRE(t.entries.size() == 6);  // empty + 3 observed + 2 unobserved

  CHECK(t.entries.at(0).provenance == WorthProvenance::Empty);
  CHECK(t.entries.at(0).worth == 0.0);

  CHECK(t.entries.at(0b0011).provenance == WorthProvenance::Observed);
  CHECK(t.entries.at(0b0011).action_count == 2);
  CHECK(t.entries.at(0b0011).worth == doctest::Approx(0.2).epsilon(1e-10));
  CHECK(t.entries.at(0b0110).worth == doctest::Approx(0.1).epsilon(1e-10));

  CHECK(t.entries.at(0b0001).provenance ==
        WorthProvenance::UnobservedOutOfSample);
  CHECK(t.entries.at(0b0001).worth == doctest::Approx(0.1).epsilon(1e-10));
  CHECK(t.entries.at(0b0100).worth == doctest::Approx(0.1).epsilon(1e-10));

  CHECK(t.worth(0b0011).has_value());
  CHECK_FALSE(t.worth(0b1000).has_value());

  WorthOptions mean_mode;
  mean_mode.observed_mean = true;
  WorthTable tm = estimate_worth(ds, cm, model, mean_mode);
  CHECK(tm.entries.at(0b0011).worth == doctest::Approx(0.1).epsilon(1e-10));

  WorthOptions affine;
  affine.scale = 2.0;
  affine.shift = 0.5;
  WorthTable ta = estimate_worth(ds, cm, model, affine);
  CHECK(ta.entries.at(0).worth == doctest::Approx(0.5));
  CHECK(ta.entries.at(0b0011).worth == doctest::Approx(0.9).epsilon(1e-10));
  CHECK(ta.entries.at(0b0001).worth == doctest::Approx(0.7).epsilon(1e-10));
}

TEST_CASE("worth estimation rejects misconfigured models") {
  Dataset ds = two_team_fixture();
  CoalitionMap cm = extract_coalitions(ds, "T");
  FittedModel xg;
  xg.kind = ModelKind::Cloglog;
  xg.spec = FeatureSpec::xg();
  xg.threshold = 0.1;
  xg.glm.coefficients.assign(4, 0.0);
  xg.glm.std_errors.assign(4, 0.0);
  CHECK(code_of([&] { estimate_worth(ds, cm, xg); }) == "BadConfig");

  FittedModel ok = flat_xga_model(0.1);
  WorthOptions bad;
  bad.scale = 0.0;
  CHECK(code_of([&] { estimate_worth(ds, cm, ok, bad); }) == "BadValue");
}

TEST_CASE("the cardinality profile reproduces exact binomials for n = 18") {
  CoalitionMap cm;
  cm.roster.team_id = "T";
  for (int i = 0; i < 18; ++i)
    cm.roster.player_ids.push_back("P" + std::to_string(i));
  cm.actions_by_coalition[0b0011] = {0};
  cm.actions_by_coalition[0b0111] = {1};

  auto rows = coalition_distribution(cm, 18, 10);
  REQUIRE(rows.size() == 10);
  CHECK(rows[0].all_count == "18");
  CHECK(rows[2].all_count == "816");
  CHECK(rows[4].all_count == "8568");

  long long total = 0;
  for (const auto& r : rows) total += std::stoll(r.all_count);
  CHECK(total == 199139);

  CHECK(rows[1].observed == 1);
  CHECK(rows[2].observed == 1);
  CHECK(rows[0].observed == 0);
  CHECK(rows[1].obs_pct == doctest::Approx(50.0));
  CHECK(rows[2].all_pct == doctest::Approx(816.0 / 199139.0 * 100.0));
}

TEST_CASE("distribution guards its bounds") {
  CoalitionMap cm;
  cm.roster.team_id = "T";
  cm.roster.player_ids = {"P0", "P1"};
  cm.actions_by_coalition[1] = {0};
  CHECK(code_of([&] { coalition_distribution(cm, 0, 1); }) == "BadValue");
  CHECK(code_of([&] { coalition_distribution(cm, 2, 3); }) == "BadValue");
  CHECK(code_of([&] { coalition_distribution(cm, 121, 5); }) == "BadValue");
  auto rows = coalition_distribution(cm, 2, 2);
  CHECK(rows[0].all_count == "2");
  CHECK(rows[1].all_count == "1");
}

TEST_CASE("large rosters and big binomials stay exact") {
  // C(120, 60) needs 128-bit arithmetic; its decimal expansion is known.
  CoalitionMap cm;
  cm.roster.team_id = "T";
  for (int i = 0; i < 120; ++i)
    cm.roster.player_ids.push_back("P" + std::to_string(i));
  cm.actions_by_coalition[3] = {0};
  auto rows = coalition_distribution(cm, 120, 60);
  CHECK(rows[59].all_count == "96614908840363322603893139521372656");

  CHECK(u128_to_string(0) == "0");
  CHECK(u128_to_string(static_cast<unsigned __int128>(1) << 100) ==
        "1267650600228229401496703205376");
}

TEST_CASE("rosters beyond 64 players cannot form masks") {
  Dataset ds;
  for (int i = 0; i < 65; ++i)
    ds.players.push_back(
        make_player("P" + std::to_string(i), "T", Role::MID));
  ds.actions = {make_action("a1", "T", "P0", {"P0"})};
  CHECK(code_of([&] { extract_coalitions(ds, "T"); }) == "TooLarge");
}
