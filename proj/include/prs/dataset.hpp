#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prs/error.hpp"

namespace prs {

enum class Role { GK, DEF, MID, FOR };
enum class Venue { Home, Away };
enum class Situation { OpenPlay, FreeKick, Penalty, Other };

std::string role_token(Role r);
std::string venue_token(Venue v);
std::string situation_token(Situation s);

struct Player {
  std::string player_id;
  std::string team_id;
  std::string name;
  Role role = Role::MID;
  double offensive_index = 0.0;
  double minutes = 0.0;
  int goals = 0;

  bool operator==(const Player&) const = default;
};

// One shot-ending possession.  participants is the sorted, de-duplicated set
// of player ids involved in the action; shooter_id is always one of them at
// load time (filtering may later remove the shooter from the set while the
// field keeps recording who shot).
struct ShotAction {
  std::string action_id;
  std::string match_id;
  std::string team_id;
  std::string shooter_id;
  std::vector<std::string> participants;
  int outcome = 0;  // 1 = goal
  double x = 0.0;
  double y = 0.0;
  double shot_angle = 0.0;
  double first_pass_x = 0.0;
  double first_pass_y = 0.0;
  int pass_nb = 0;
  int players_nb = 0;
  double avg_pass_distance = 0.0;
  double pl_performance_index = 0.0;
  Venue h_a = Venue::Home;
  Situation situation = Situation::OpenPlay;
  double minute = 0.0;

  bool operator==(const ShotAction&) const = default;
};

struct FilterStep {
  std::string step;   // e.g. "penalty_exclusion"
  std::string scope;  // "actions" or "players"
  std::size_t before = 0;
  std::size_t after = 0;
  std::string note;
};

struct Dataset {
  std::vector<Player> players;
  std::vector<ShotAction> actions;
  std::vector<FilterStep> filter_log;
  std::string actions_path;
  std::string players_path;

  const Player* find_player(const std::string& id) const;
  std::vector<std::string> team_ids() const;  // unique, sorted
};

// Maps lowercase input tokens onto canonical ones.  Values must themselves be
// canonical; load_config validates that.  Built-in spellings (case variants,
// "home"/"away", "goalkeeper", ...) are always accepted.
struct AliasTables {
  std::map<std::string, std::string> situation;
  std::map<std::string, std::string> role;
};

struct LoadOptions {
  AliasTables aliases;
  // strict = true: unknown situation tokens are an error.  strict = false:
  // they fall back to Other and are counted in the returned warnings.
  bool strict = true;
  std::vector<std::string>* warnings = nullptr;
};

Role parse_role(const std::string& token, const AliasTables& aliases,
                const std::string& context);
Venue parse_venue(const std::string& token, const std::string& context);
Situation parse_situation(const std::string& token, const LoadOptions& opts,
                          const std::string& context);

std::vector<Player> load_players(const std::string& path,
                                 const LoadOptions& opts = {});
std::vector<ShotAction> load_actions(const std::string& path,
                                     std::span<const Player> players,
                                     const LoadOptions& opts = {});
Dataset load_dataset(const std::string& actions_path,
                     const std::string& players_path,
                     const LoadOptions& opts = {});

void save_players(const std::string& path, std::span<const Player> players);
void save_actions(const std::string& path, std::span<const ShotAction> actions);

// Exclusion cascade: penalty actions out, goalkeepers out of rosters and
// participant sets, then players below min_actions participations removed
// and the removal re-applied until no player falls below the threshold.
// Actions whose participant set empties are dropped.  min_actions = 0 keeps
// every non-GK player, including those left with zero actions.  Appends one
// FilterStep per pass to the result's filter_log.  Throws EmptyResult when
// nothing survives.  Applying the filter to its own output is the identity.
Dataset filter_dataset(const Dataset& in, int min_actions = 60);

struct SynthConfig {
  std::uint64_t seed = 7;
  int n_teams = 2;
  int players_per_team = 15;
  int actions_per_team = 600;
  double goal_prevalence = 0.10;
};

struct SynthMeta {
  SynthConfig config;
  double intercept = 0.0;  // calibrated so mean predicted prob = prevalence
  std::map<std::string, double> coefficients;
  double empirical_prevalence = 0.0;
};

// Ground-truth linear coefficients (by feature column name) used by the
// generator's outcome model; exposed so recovery tests compare against them.
const std::map<std::string, double>& synthetic_truth_coefficients();

// Draws a league whose marginal feature distributions, coalition cardinality
// profile and goal base rate mimic real shot data.  Outcomes follow a
// complementary-log-log model over the same feature encoding the library
// fits, with the intercept calibrated by bisection so the mean success
// probability over the realized feature rows equals goal_prevalence.
Dataset generate_synthetic(const SynthConfig& cfg, SynthMeta* meta = nullptr);

}  // namespace prs
