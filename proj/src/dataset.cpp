#include "prs/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "prs/csv.hpp"
#include "prs/rng.hpp"
#include "prs/stats.hpp"

namespace prs {

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

const std::map<std::string, Role>& builtin_roles() {
  static const std::map<std::string, Role> m = {
      {"gk", Role::GK},   {"goalkeeper", Role::GK}, {"def", Role::DEF},
      {"defender", Role::DEF}, {"mid", Role::MID},  {"midfielder", Role::MID},
      {"for", Role::FOR}, {"forward", Role::FOR},   {"fw", Role::FOR},
  };
  return m;
}

const std::map<std::string, Situation>& builtin_situations() {
  static const std::map<std::string, Situation> m = {
      {"open_play", Situation::OpenPlay}, {"openplay", Situation::OpenPlay},
      {"open play", Situation::OpenPlay}, {"free_kick", Situation::FreeKick},
      {"freekick", Situation::FreeKick},  {"free kick", Situation::FreeKick},
      {"penalty", Situation::Penalty},    {"other", Situation::Other},
      {"others", Situation::Other},
  };
  return m;
}

int require_column(const CsvTable& t, const std::string& name,
                   const std::string& path) {
  const int idx = t.column(name);
  if (idx < 0)
    throw PrsError("MissingColumn", path + ": missing column '" + name + "'");
  return idx;
}

double check_range(double v, double lo, double hi, const std::string& what,
                   const std::string& context) {
  if (!(v >= lo && v <= hi))
    throw PrsError("BadValue", context + ": " + what + " = " +
                                   format_double(v) + " outside [" +
                                   format_double(lo) + ", " +
                                   format_double(hi) + "]");
  return v;
}

}  // namespace

std::string role_token(Role r) {
  switch (r) {
    case Role::GK: return "GK";
    case Role::DEF: return "DEF";
    case Role::MID: return "MID";
    case Role::FOR: return "FOR";
  }
  return "MID";
}

std::string venue_token(Venue v) { return v == Venue::Home ? "h" : "a"; }

std::string situation_token(Situation s) {
  switch (s) {
    case Situation::OpenPlay: return "open_play";
    case Situation::FreeKick: return "free_kick";
    case Situation::Penalty: return "penalty";
    case Situation::Other: return "other";
  }
  return "open_play";
}

Role parse_role(const std::string& token, const AliasTables& aliases,
                const std::string& context) {
  const std::string t = lower(trim(token));
  auto alias = aliases.role.find(t);
  const std::string& key = alias != aliases.role.end() ? alias->second : t;
  auto it = builtin_roles().find(key);
  if (it == builtin_roles().end())
    throw PrsError("BadRole", context + ": unknown role '" + token + "'");
  return it->second;
}

Venue parse_venue(const std::string& token, const std::string& context) {
  const std::string t = lower(trim(token));
  if (t == "h" || t == "home") return Venue::Home;
  if (t == "a" || t == "away") return Venue::Away;
  throw PrsError("BadEnum", context + ": unknown venue '" + token + "'");
}

Situation parse_situation(const std::string& token, const LoadOptions& opts,
                          const std::string& context) {
  const std::string t = lower(trim(token));
  auto alias = opts.aliases.situation.find(t);
  const std::string& key =
      alias != opts.aliases.situation.end() ? alias->second : t;
  auto it = builtin_situations().find(key);
  if (it != builtin_situations().end()) return it->second;
  if (opts.strict)
    throw PrsError("BadEnum", context + ": unknown situation '" + token + "'");
  if (opts.warnings)
    opts.warnings->push_back(context + ": situation '" + token +
                             "' mapped to other");
  return Situation::Other;
}

const Player* Dataset::find_player(const std::string& id) const {
  for (const auto& p : players)
    if (p.player_id == id) return &p;
  return nullptr;
}

std::vector<std::string> Dataset::team_ids() const {
  std::set<std::string> seen;
  for (const auto& p : players) seen.insert(p.team_id);
  for (const auto& a : actions) seen.insert(a.team_id);
  return {seen.begin(), seen.end()};
}

std::vector<Player> load_players(const std::string& path,
                                 const LoadOptions& opts) {
  const CsvTable t = read_csv(path);
  const int c_id = require_column(t, "player_id", path);
  const int c_team = require_column(t, "team_id", path);
  const int c_name = require_column(t, "name", path);
  const int c_role = require_column(t, "role", path);
  const int c_oi = require_column(t, "offensive_index", path);
  const int c_min = require_column(t, "minutes", path);
  const int c_goals = require_column(t, "goals", path);

  std::vector<Player> players;
  players.reserve(t.rows.size());
  std::unordered_set<std::string> seen;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::string ctx = path + " row " + std::to_string(r + 2);
    Player p;
    p.player_id = trim(row[c_id]);
    if (p.player_id.empty())
      throw PrsError("BadValue", ctx + ": empty player_id");
    if (!seen.insert(p.player_id).second)
      throw PrsError("DuplicatePlayerId",
                     ctx + ": duplicate player_id '" + p.player_id + "'");
    p.team_id = trim(row[c_team]);
    if (p.team_id.empty()) throw PrsError("BadValue", ctx + ": empty team_id");
    p.name = row[c_name];
    p.role = parse_role(row[c_role], opts.aliases, ctx);
    p.offensive_index = parse_double(row[c_oi], ctx + " offensive_index");
    if (!std::isfinite(p.offensive_index))
      throw PrsError("BadValue", ctx + ": non-finite offensive_index");
    p.minutes = parse_double(row[c_min], ctx + " minutes");
    if (!(p.minutes >= 0.0))
      throw PrsError("BadValue", ctx + ": minutes must be >= 0");
    const long long goals = parse_int(row[c_goals], ctx + " goals");
    if (goals < 0) throw PrsError("BadValue", ctx + ": goals must be >= 0");
    p.goals = static_cast<int>(goals);
    players.push_back(std::move(p));
  }
  return players;
}

std::vector<ShotAction> load_actions(const std::string& path,
                                     std::span<const Player> players,
                                     const LoadOptions& opts) {
  const CsvTable t = read_csv(path);
  const int c_id = require_column(t, "action_id", path);
  const int c_match = require_column(t, "match_id", path);
  const int c_team = require_column(t, "team_id", path);
  const int c_shooter = require_column(t, "shooter_id", path);
  const int c_part = require_column(t, "participants", path);
  const int c_outcome = require_column(t, "outcome", path);
  const int c_x = require_column(t, "x", path);
  const int c_y = require_column(t, "y", path);
  const int c_angle = require_column(t, "shot_angle", path);
  const int c_fpx = require_column(t, "first_pass_x", path);
  const int c_fpy = require_column(t, "first_pass_y", path);
  const int c_passnb = require_column(t, "pass_nb", path);
  const int c_playersnb = require_column(t, "players_nb", path);
  const int c_apd = require_column(t, "avg_pass_distance", path);
  const int c_ppi = require_column(t, "pl_performance_index", path);
  const int c_ha = require_column(t, "h_a", path);
  const int c_sit = require_column(t, "situation", path);
  const int c_minute = require_column(t, "minute", path);

  std::unordered_map<std::string, const Player*> by_id;
  for (const auto& p : players) by_id[p.player_id] = &p;

  std::vector<ShotAction> actions;
  actions.reserve(t.rows.size());
  std::unordered_set<std::string> seen;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::string ctx = path + " row " + std::to_string(r + 2);
    ShotAction a;
    a.action_id = trim(row[c_id]);
    if (a.action_id.empty())
      throw PrsError("BadValue", ctx + ": empty action_id");
    if (!seen.insert(a.action_id).second)
      throw PrsError("DuplicateActionId",
                     ctx + ": duplicate action_id '" + a.action_id + "'");
    a.match_id = trim(row[c_match]);
    a.team_id = trim(row[c_team]);
    a.shooter_id = trim(row[c_shooter]);

    std::set<std::string> parts;
    std::stringstream ss(row[c_part]);
    std::string tok;
    while (std::getline(ss, tok, ';')) {
      tok = trim(tok);
      if (!tok.empty()) parts.insert(tok);
    }
    if (parts.empty())
      throw PrsError("BadValue", ctx + ": empty participants");
    for (const auto& pid : parts) {
      auto it = by_id.find(pid);
      if (it == by_id.end())
        throw PrsError("UnknownPlayer",
                       ctx + ": participant '" + pid + "' not in players");
      if (it->second->team_id != a.team_id)
        throw PrsError("TeamMismatch", ctx + ": participant '" + pid +
                                           "' belongs to team " +
                                           it->second->team_id + ", action to " +
                                           a.team_id);
    }
    a.participants.assign(parts.begin(), parts.end());

    auto sh = by_id.find(a.shooter_id);
    if (sh == by_id.end())
      throw PrsError("UnknownPlayer",
                     ctx + ": shooter '" + a.shooter_id + "' not in players");
    if (sh->second->team_id != a.team_id)
      throw PrsError("TeamMismatch", ctx + ": shooter team mismatch");
    if (!parts.count(a.shooter_id))
      throw PrsError("ShooterNotParticipant",
                     ctx + ": shooter '" + a.shooter_id +
                         "' absent from participants");

    const long long outcome = parse_int(row[c_outcome], ctx + " outcome");
    if (outcome != 0 && outcome != 1)
      throw PrsError("BadValue", ctx + ": outcome must be 0 or 1");
    a.outcome = static_cast<int>(outcome);

    a.x = check_range(parse_double(row[c_x], ctx + " x"), 0, 100, "x", ctx);
    a.y = check_range(parse_double(row[c_y], ctx + " y"), 0, 100, "y", ctx);
    a.shot_angle = parse_double(row[c_angle], ctx + " shot_angle");
    if (!(a.shot_angle >= 0.0) || !std::isfinite(a.shot_angle))
      throw PrsError("BadValue", ctx + ": shot_angle must be >= 0");
    a.first_pass_x = check_range(parse_double(row[c_fpx], ctx + " first_pass_x"),
                                 0, 100, "first_pass_x", ctx);
    a.first_pass_y = check_range(parse_double(row[c_fpy], ctx + " first_pass_y"),
                                 0, 100, "first_pass_y", ctx);
    const long long pass_nb = parse_int(row[c_passnb], ctx + " pass_nb");
    if (pass_nb < 0) throw PrsError("BadValue", ctx + ": pass_nb must be >= 0");
    a.pass_nb = static_cast<int>(pass_nb);
    const long long players_nb =
        parse_int(row[c_playersnb], ctx + " players_nb");
    if (players_nb < 1)
      throw PrsError("BadValue", ctx + ": players_nb must be >= 1");
    a.players_nb = static_cast<int>(players_nb);
    if (a.players_nb != static_cast<int>(a.participants.size()))
      throw PrsError("UnknownCount",
                     ctx + ": players_nb = " + std::to_string(a.players_nb) +
                         " but participants lists " +
                         std::to_string(a.participants.size()));
    a.avg_pass_distance =
        parse_double(row[c_apd], ctx + " avg_pass_distance");
    if (!(a.avg_pass_distance >= 0.0))
      throw PrsError("BadValue", ctx + ": avg_pass_distance must be >= 0");
    a.pl_performance_index =
        parse_double(row[c_ppi], ctx + " pl_performance_index");
    if (!std::isfinite(a.pl_performance_index))
      throw PrsError("BadValue", ctx + ": non-finite pl_performance_index");
    a.h_a = parse_venue(row[c_ha], ctx);
    a.situation = parse_situation(row[c_sit], opts, ctx);
    a.minute = parse_double(row[c_minute], ctx + " minute");
    if (!(a.minute >= 0.0))
      throw PrsError("BadValue", ctx + ": minute must be >= 0");
    actions.push_back(std::move(a));
  }
  return actions;
}

Dataset load_dataset(const std::string& actions_path,
                     const std::string& players_path,
                     const LoadOptions& opts) {
  Dataset ds;
  ds.players = load_players(players_path, opts);
  ds.actions = load_actions(actions_path, ds.players, opts);
  ds.actions_path = actions_path;
  ds.players_path = players_path;
  return ds;
}

void save_players(const std::string& path, std::span<const Player> players) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(players.size());
  for (const auto& p : players)
    rows.push_back({p.player_id, p.team_id, p.name, role_token(p.role),
                    format_double(p.offensive_index), format_double(p.minutes),
                    format_int(p.goals)});
  write_csv(path,
            {"player_id", "team_id", "name", "role", "offensive_index",
             "minutes", "goals"},
            rows);
}

void save_actions(const std::string& path,
                  std::span<const ShotAction> actions) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(actions.size());
  for (const auto& a : actions) {
    std::string parts;
    for (std::size_t i = 0; i < a.participants.size(); ++i) {
      if (i) parts.push_back(';');
      parts += a.participants[i];
    }
    rows.push_back({a.action_id, a.match_id, a.team_id, a.shooter_id, parts,
                    format_int(a.outcome), format_double(a.x),
                    format_double(a.y), format_double(a.shot_angle),
                    format_double(a.first_pass_x), format_double(a.first_pass_y),
                    format_int(a.pass_nb), format_int(a.players_nb),
                    format_double(a.avg_pass_distance),
                    format_double(a.pl_performance_index), venue_token(a.h_a),
                    situation_token(a.situation), format_double(a.minute)});
  }
  write_csv(path,
            {"action_id", "match_id", "team_id", "shooter_id", "participants",
             "outcome", "x", "y", "shot_angle", "first_pass_x", "first_pass_y",
             "pass_nb", "players_nb", "avg_pass_distance",
             "pl_performance_index", "h_a", "situation", "minute"},
            rows);
}

namespace {

// Removes the given players from every participant set, keeps players_nb in
// step with the set size, and drops actions whose set empties.  Returns the
// number of dropped actions.
std::size_t scrub_participants(std::vector<ShotAction>& actions,
                               const std::unordered_set<std::string>& gone) {
  const std::size_t before = actions.size();
  std::vector<ShotAction> kept;
  kept.reserve(actions.size());
  for (auto& a : actions) {
    std::erase_if(a.participants,
                  [&](const std::string& pid) { return gone.count(pid) > 0; });
    if (a.participants.empty()) continue;
    a.players_nb = static_cast<int>(a.participants.size());
    kept.push_back(std::move(a));
  }
  actions = std::move(kept);
  return before - actions.size();
}

std::unordered_map<std::string, int> participation_counts(
    const std::vector<ShotAction>& actions) {
  std::unordered_map<std::string, int> counts;
  for (const auto& a : actions)
    for (const auto& pid : a.participants) ++counts[pid];
  return counts;
}

}  // namespace

Dataset filter_dataset(const Dataset& in, int min_actions) {
  if (min_actions < 0)
    throw PrsError("BadValue", "min_actions must be >= 0");
  Dataset ds = in;

  {
    const std::size_t before = ds.actions.size();
    std::erase_if(ds.actions, [](const ShotAction& a) {
      return a.situation == Situation::Penalty;
    });
    ds.filter_log.push_back({"penalty_exclusion", "actions", before,
                             ds.actions.size(), ""});
  }

  {
    std::unordered_set<std::string> gks;
    for (const auto& p : ds.players)
      if (p.role == Role::GK) gks.insert(p.player_id);
    const std::size_t pb = ds.players.size();
    std::erase_if(ds.players,
                  [&](const Player& p) { return p.role == Role::GK; });
    ds.filter_log.push_back({"goalkeeper_exclusion", "players", pb,
                             ds.players.size(), ""});
    const std::size_t ab = ds.actions.size();
    const std::size_t dropped = scrub_participants(ds.actions, gks);
    ds.filter_log.push_back({"goalkeeper_exclusion", "actions", ab,
                             ds.actions.size(),
                             dropped ? "participant sets emptied" : ""});
  }

  for (int pass = 1;; ++pass) {
    const auto counts = participation_counts(ds.actions);
    std::unordered_set<std::string> gone;
    for (const auto& p : ds.players) {
      auto it = counts.find(p.player_id);
      const int c = it == counts.end() ? 0 : it->second;
      if (c < min_actions) gone.insert(p.player_id);
    }
    if (gone.empty()) break;
    const std::size_t pb = ds.players.size();
    std::erase_if(ds.players, [&](const Player& p) {
      return gone.count(p.player_id) > 0;
    });
    const std::size_t ab = ds.actions.size();
    scrub_participants(ds.actions, gone);
    const std::string note = "pass " + std::to_string(pass);
    ds.filter_log.push_back(
        {"min_actions", "players", pb, ds.players.size(), note});
    ds.filter_log.push_back(
        {"min_actions", "actions", ab, ds.actions.size(), note});
  }

  if (ds.actions.empty())
    throw PrsError("EmptyResult", "no actions survive the exclusion cascade");
  return ds;
}

namespace {

double clamp(double v, double lo, double hi) {
  return v < lo ? lo : (v > hi ? hi : v);
}

double inv_cloglog(double eta) {
  eta = clamp(eta, -30.0, 30.0);
  return 1.0 - std::exp(-std::exp(eta));
}

// Observed per-cardinality frequencies of real coalition data, sizes 1..10.
constexpr double kCardinalityWeights[10] = {3.02, 11.60, 16.71, 13.23, 14.85,
                                            13.69, 9.28, 10.90, 4.87, 1.86};

struct PendingAction {
  ShotAction a;
  double eta_partial = 0.0;  // linear predictor without the intercept
};

// Weighted sample of `take` distinct indices; weights consumed on pick.
std::vector<int> weighted_distinct(Rng& rng, std::vector<double> weights,
                                   int take) {
  std::vector<int> out;
  out.reserve(take);
  for (int k = 0; k < take; ++k) {
    const int idx = rng.categorical(weights);
    out.push_back(idx);
    weights[idx] = 0.0;
  }
  return out;
}

}  // namespace

const std::map<std::string, double>& synthetic_truth_coefficients() {
  static const std::map<std::string, double> m = {
      {"x", 0.06},
      {"y", 0.0},
      {"shot_angle", -0.02},
      {"first_pass_x", -0.004},
      {"first_pass_y", 0.0},
      {"pass_nb", 0.0},
      {"players_nb", -0.04},
      {"avg_pass_distance", -0.012},
      {"pl_performance_index", 0.02},
      {"h_a_home", 0.0},
      {"situation_free_kick", -0.15},
      {"situation_penalty", 1.6},
      {"situation_other", -0.1},
  };
  return m;
}

Dataset generate_synthetic(const SynthConfig& cfg, SynthMeta* meta) {
  if (cfg.n_teams < 1 || cfg.actions_per_team < 1)
    throw PrsError("BadValue", "synthetic counts must be positive");
  if (cfg.players_per_team < 2)
    throw PrsError("BadValue",
                   "players_per_team must be >= 2 (one GK plus outfield)");
  if (!(cfg.goal_prevalence > 0.0 && cfg.goal_prevalence < 1.0))
    throw PrsError("BadValue", "goal_prevalence must lie in (0, 1)");

  Rng rng = Rng::stream(cfg.seed, 0, kSaltSynth);
  const auto& beta = synthetic_truth_coefficients();
  Dataset ds;

  for (int t = 0; t < cfg.n_teams; ++t) {
    const std::string team = "T" + std::to_string(t + 1);
    const int r = cfg.players_per_team - 1;  // outfield count
    const int n_def = (r + 2) / 3;
    const int n_mid = (r + 1) / 3;
    for (int j = 0; j < cfg.players_per_team; ++j) {
      Player p;
      char idbuf[16];
      std::snprintf(idbuf, sizeof(idbuf), "P%02d", j + 1);
      p.player_id = team + "_" + idbuf;
      p.team_id = team;
      p.name = team + " player " + std::to_string(j + 1);
      if (j == 0) p.role = Role::GK;
      else if (j <= n_def) p.role = Role::DEF;
      else if (j <= n_def + n_mid) p.role = Role::MID;
      else p.role = Role::FOR;
      p.offensive_index = rng.uniform(55.0, 95.0);
      p.minutes = rng.uniform(700.0, 3400.0);
      p.goals = 0;  // filled from generated outcomes below
      ds.players.push_back(std::move(p));
    }
  }

  std::unordered_map<std::string, Player*> by_id;
  for (auto& p : ds.players) by_id[p.player_id] = &p;

  std::vector<PendingAction> pending;
  pending.reserve(static_cast<std::size_t>(cfg.n_teams) *
                  cfg.actions_per_team);

  for (int t = 0; t < cfg.n_teams; ++t) {
    const std::string team = "T" + std::to_string(t + 1);
    std::vector<const Player*> outfield;
    const Player* keeper = nullptr;
    for (const auto& p : ds.players)
      if (p.team_id == team) {
        if (p.role == Role::GK) keeper = &p;
        else outfield.push_back(&p);
      }

    std::vector<double> role_weight(outfield.size());
    for (std::size_t i = 0; i < outfield.size(); ++i) {
      switch (outfield[i]->role) {
        case Role::FOR: role_weight[i] = 1.6; break;
        case Role::MID: role_weight[i] = 1.15; break;
        default: role_weight[i] = 0.75; break;
      }
    }

    for (int k = 0; k < cfg.actions_per_team; ++k) {
      ShotAction a;
      char idbuf[16];
      std::snprintf(idbuf, sizeof(idbuf), "A%05d", k + 1);
      a.action_id = team + "_" + idbuf;
      a.match_id = team + "_M" + std::to_string(k % 38 + 1);
      a.team_id = team;

      const double sit_w[4] = {0.73, 0.09, 0.01, 0.17};
      switch (rng.categorical(sit_w)) {
        case 0: a.situation = Situation::OpenPlay; break;
        case 1: a.situation = Situation::FreeKick; break;
        case 2: a.situation = Situation::Penalty; break;
        default: a.situation = Situation::Other; break;
      }

      std::vector<const Player*> members;
      if (a.situation == Situation::Penalty) {
        members.push_back(outfield[rng.categorical(role_weight)]);
      } else {
        const int max_c =
            std::min(static_cast<int>(outfield.size()),
                     static_cast<int>(std::size(kCardinalityWeights)));
        const int c =
            1 + rng.categorical(std::span(kCardinalityWeights, max_c));
        for (int idx : weighted_distinct(rng, role_weight, c))
          members.push_back(outfield[idx]);
        if (keeper && rng.bernoulli(0.02)) members.push_back(keeper);
      }

      std::vector<const Player*> shooters;
      for (const Player* m : members)
        if (m->role != Role::GK) shooters.push_back(m);
      a.shooter_id =
          shooters[rng.below(shooters.size())]->player_id;

      std::set<std::string> part_ids;
      double oi_sum = 0.0;
      for (const Player* m : members) {
        part_ids.insert(m->player_id);
        oi_sum += m->offensive_index;
      }
      a.participants.assign(part_ids.begin(), part_ids.end());
      a.players_nb = static_cast<int>(a.participants.size());
      a.pl_performance_index = oi_sum / static_cast<double>(members.size());

      a.h_a = rng.bernoulli(0.54) ? Venue::Home : Venue::Away;
      a.minute = rng.uniform(0.0, 95.0);
      a.x = clamp(rng.normal(85.3, 7.4), 50.0, 100.0);
      a.y = clamp(rng.normal(50.8, 12.4), 0.0, 100.0);
      a.shot_angle = clamp(std::fabs(rng.normal(33.8, 21.0)), 0.5, 90.0);
      a.first_pass_x = clamp(rng.normal(51.2, 27.1), 0.0, 100.0);
      a.first_pass_y = clamp(rng.normal(50.8, 29.3), 0.0, 100.0);
      a.pass_nb = a.situation == Situation::Penalty
                      ? 0
                      : a.players_nb - 1 + rng.poisson(2.6);
      a.avg_pass_distance =
          a.pass_nb == 0 ? 0.0 : clamp(rng.normal(27.3, 10.6), 1.0, 80.0);

      PendingAction pa;
      pa.eta_partial =
          beta.at("x") * a.x + beta.at("y") * a.y +
          beta.at("shot_angle") * a.shot_angle +
          beta.at("first_pass_x") * a.first_pass_x +
          beta.at("first_pass_y") * a.first_pass_y +
          beta.at("pass_nb") * a.pass_nb +
          beta.at("players_nb") * a.players_nb +
          beta.at("avg_pass_distance") * a.avg_pass_distance +
          beta.at("pl_performance_index") * a.pl_performance_index +
          beta.at("h_a_home") * (a.h_a == Venue::Home ? 1.0 : 0.0) +
          beta.at("situation_free_kick") *
              (a.situation == Situation::FreeKick ? 1.0 : 0.0) +
          beta.at("situation_penalty") *
              (a.situation == Situation::Penalty ? 1.0 : 0.0) +
          beta.at("situation_other") *
              (a.situation == Situation::Other ? 1.0 : 0.0);
      pa.a = std::move(a);
      pending.push_back(std::move(pa));
    }
  }

  // Calibrate the intercept: mean mu over realized rows is increasing in b0,
  // so bisection pins it to the requested prevalence.
  double lo = -40.0, hi = 20.0;
  auto mean_mu = [&](double b0) {
    KahanSum s;
    for (const auto& pa : pending) s.add(inv_cloglog(pa.eta_partial + b0));
    return s.get() / static_cast<double>(pending.size());
  };
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mean_mu(mid) < cfg.goal_prevalence) lo = mid;
    else hi = mid;
  }
  const double intercept = 0.5 * (lo + hi);

  long long goals_total = 0;
  for (auto& pa : pending) {
    const double mu = inv_cloglog(pa.eta_partial + intercept);
    pa.a.outcome = rng.bernoulli(mu) ? 1 : 0;
    if (pa.a.outcome) {
      ++goals_total;
      ++by_id.at(pa.a.shooter_id)->goals;
    }
    ds.actions.push_back(std::move(pa.a));
  }

  if (meta) {
    meta->config = cfg;
    meta->intercept = intercept;
    meta->coefficients = beta;
    meta->empirical_prevalence =
        static_cast<double>(goals_total) /
        static_cast<double>(ds.actions.size());
  }
  ds.actions_path = "<synthetic>";
  ds.players_path = "<synthetic>";
  return ds;
}

}  // namespace prs
