#include "prs/coalition.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "prs/csv.hpp"
#include "prs/features.hpp"
#include "prs/stats.hpp"

namespace prs {

int Roster::index_of(const std::string& player_id) const {
  for (std::size_t i = 0; i < player_ids.size(); ++i)
    if (player_ids[i] == player_id) return static_cast<int>(i);
  return -1;
}

Roster make_roster(const Dataset& ds, const std::string& team_id) {
  Roster roster;
  roster.team_id = team_id;
  for (const auto& p : ds.players)
    if (p.team_id == team_id) roster.player_ids.push_back(p.player_id);
  if (roster.player_ids.empty())
    throw PrsError("EmptyResult", "team '" + team_id + "' has no players");
  if (roster.n() > 64)
    throw PrsError("TooLarge", "team '" + team_id + "' exceeds 64 players");
  return roster;
}

CoalitionMap extract_coalitions(const Dataset& ds, const std::string& team_id) {
  CoalitionMap map;
  map.roster = make_roster(ds, team_id);
  for (std::size_t i = 0; i < ds.actions.size(); ++i) {
    const ShotAction& a = ds.actions[i];
    if (a.team_id != team_id) continue;
    std::uint64_t mask = 0;
    for (const auto& pid : a.participants) {
      const int idx = map.roster.index_of(pid);
      if (idx < 0)
        throw PrsError("UnknownPlayer", "action " + a.action_id +
                                            ": participant '" + pid +
                                            "' missing from the roster");
      mask |= std::uint64_t{1} << idx;
    }
    map.actions_by_coalition[mask].push_back(static_cast<int>(i));
  }
  if (map.actions_by_coalition.empty())
    throw PrsError("EmptyResult", "team '" + team_id + "' has no actions");
  return map;
}

std::vector<SupportEntry> player_support(const CoalitionMap& map, int player) {
  if (player < 0 || player >= map.roster.n())
    throw PrsError("BadValue", "player index out of range");
  const std::uint64_t bit = std::uint64_t{1} << player;
  std::set<std::uint64_t> seen;
  for (const auto& [mask, rows] : map.actions_by_coalition)
    if (mask & bit) seen.insert(mask ^ bit);
  if (seen.empty())
    throw PrsError("EmptySupport",
                   "player '" + map.roster.player_ids[player] +
                       "' appears in no observed coalition");
  std::vector<SupportEntry> out;
  out.reserve(seen.size());
  for (std::uint64_t mask : seen)
    out.push_back({mask, map.observed(mask)});
  return out;
}

std::vector<std::uint64_t> compatible_unobserved(const CoalitionMap& map) {
  std::set<std::uint64_t> out;
  for (const auto& [mask, rows] : map.actions_by_coalition) {
    std::uint64_t rest = mask;
    while (rest) {
      const std::uint64_t bit = rest & (~rest + 1);
      rest ^= bit;
      const std::uint64_t c = mask ^ bit;
      if (c != 0 && !map.observed(c)) out.insert(c);
    }
  }
  return {out.begin(), out.end()};
}

TeamStats team_feature_means(const Dataset& ds, const CoalitionMap& map) {
  KahanSum x, y, angle, fpx, fpy, apd;
  std::size_t n = 0;
  for (const auto& [mask, rows] : map.actions_by_coalition)
    for (int idx : rows) {
      const ShotAction& a = ds.actions[idx];
      x.add(a.x);
      y.add(a.y);
      angle.add(a.shot_angle);
      fpx.add(a.first_pass_x);
      fpy.add(a.first_pass_y);
      apd.add(a.avg_pass_distance);
      ++n;
    }
  if (n == 0) throw PrsError("EmptyResult", "no actions to average");
  const double dn = static_cast<double>(n);
  return {x.get() / dn,   y.get() / dn,   angle.get() / dn,
          fpx.get() / dn, fpy.get() / dn, apd.get() / dn};
}

ShotAction synth_coalition_features(std::uint64_t mask, const Roster& roster,
                                    const TeamStats& stats, const Dataset& ds) {
  if (mask == 0)
    throw PrsError("BadValue", "cannot synthesize the empty coalition");
  ShotAction a;
  a.action_id = "synthetic:" + roster.team_id + ":" + hex64(mask);
  a.match_id = "synthetic";
  a.team_id = roster.team_id;

  std::vector<std::string> members;
  double oi_sum = 0.0;
  for (int i = 0; i < roster.n(); ++i)
    if (mask & (std::uint64_t{1} << i)) {
      const std::string& pid = roster.player_ids[i];
      members.push_back(pid);
      const Player* p = ds.find_player(pid);
      if (!p)
        throw PrsError("UnknownPlayer",
                       "roster player '" + pid + "' missing from dataset");
      oi_sum += p->offensive_index;
    }
  std::sort(members.begin(), members.end());
  a.participants = members;
  a.shooter_id = members.front();
  const int c = static_cast<int>(members.size());
  a.players_nb = c;
  a.pass_nb = c - 1;
  a.pl_performance_index = oi_sum / c;
  a.x = stats.x;
  a.y = stats.y;
  a.shot_angle = stats.shot_angle;
  a.first_pass_x = stats.first_pass_x;
  a.first_pass_y = stats.first_pass_y;
  a.avg_pass_distance = c == 1 ? 0.0 : stats.avg_pass_distance;
  a.h_a = Venue::Home;
  a.situation = Situation::OpenPlay;
  a.minute = 0.0;
  a.outcome = 0;
  return a;
}

std::optional<double> WorthTable::worth(std::uint64_t mask) const {
  auto it = entries.find(mask);
  if (it == entries.end()) return std::nullopt;
  return it->second.worth;
}

WorthTable estimate_worth(const Dataset& ds, const CoalitionMap& map,
                          const FittedModel& model, const WorthOptions& opts) {
  if (model.spec.mode != FeatureMode::XGA)
    throw PrsError("BadConfig",
                   "coalition worth requires a model fitted on XGA features");
  if (!(opts.scale > 0.0))
    throw PrsError("BadValue", "worth scale must be positive");

  WorthTable table;
  table.entries[0] = {0, opts.scale * 0.0 + opts.shift,
                      WorthProvenance::Empty, 0};

  // In-sample predictions over the team's observed actions.
  std::vector<int> obs_rows;
  std::vector<const ShotAction*> obs_actions;
  for (const auto& [mask, rows] : map.actions_by_coalition)
    for (int idx : rows) {
      obs_rows.push_back(idx);
      obs_actions.push_back(&ds.actions[idx]);
    }
  std::vector<ShotAction> flat;
  flat.reserve(obs_actions.size());
  for (const ShotAction* a : obs_actions) flat.push_back(*a);
  const ActionMatrix obs_m = build_features(flat, FeatureSpec::xga());
  const std::vector<double> p_obs = predict_proba(model, obs_m);
  std::map<int, double> p_by_row;
  for (std::size_t i = 0; i < obs_rows.size(); ++i)
    p_by_row[obs_rows[i]] = p_obs[i];

  for (const auto& [mask, rows] : map.actions_by_coalition) {
    KahanSum sum;
    for (int idx : rows) sum.add(p_by_row.at(idx));
    double worth = sum.get();
    if (opts.observed_mean) worth /= static_cast<double>(rows.size());
    table.entries[mask] = {mask, opts.scale * worth + opts.shift,
                           WorthProvenance::Observed,
                           static_cast<int>(rows.size())};
  }

  const std::vector<std::uint64_t> unobs = compatible_unobserved(map);
  if (!unobs.empty()) {
    const TeamStats stats = team_feature_means(ds, map);
    std::vector<ShotAction> synth;
    synth.reserve(unobs.size());
    for (std::uint64_t mask : unobs)
      synth.push_back(
          synth_coalition_features(mask, map.roster, stats, ds));
    const ActionMatrix synth_m = build_features(synth, FeatureSpec::xga());
    const std::vector<double> p_synth = predict_proba(model, synth_m);
    for (std::size_t i = 0; i < unobs.size(); ++i)
      table.entries[unobs[i]] = {unobs[i],
                                 opts.scale * p_synth[i] + opts.shift,
                                 WorthProvenance::UnobservedOutOfSample, 0};
  }
  return table;
}

std::string u128_to_string(unsigned __int128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

namespace {

// Exact C(n, k); the running product divides evenly at every step.
unsigned __int128 binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<unsigned>(n - k + i);
    c = c / static_cast<unsigned>(i);
  }
  return c;
}

}  // namespace

std::vector<DistRow> coalition_distribution(const CoalitionMap& map, int n,
                                            int k_max) {
  if (n < 1 || n > 120)
    throw PrsError("BadValue", "coalition_distribution needs 1 <= n <= 120");
  if (k_max < 1 || k_max > n)
    throw PrsError("BadValue", "k_max must lie in [1, n]");

  std::vector<long> observed(k_max + 1, 0);
  long total_observed = 0;
  for (const auto& [mask, rows] : map.actions_by_coalition) {
    const int c = std::popcount(mask);
    if (c >= 1 && c <= k_max) {
      ++observed[c];
      ++total_observed;
    }
  }

  unsigned __int128 total_all = 0;
  for (int k = 1; k <= k_max; ++k) total_all += binomial(n, k);

  std::vector<DistRow> rows;
  rows.reserve(k_max);
  for (int k = 1; k <= k_max; ++k) {
    DistRow r;
    r.cardinality = k;
    const unsigned __int128 all = binomial(n, k);
    r.all_count = u128_to_string(all);
    r.all_pct = total_all > 0
                    ? 100.0 * static_cast<double>(all) /
                          static_cast<double>(total_all)
                    : 0.0;
    r.observed = observed[k];
    r.obs_pct = total_observed > 0
                    ? 100.0 * static_cast<double>(observed[k]) /
                          static_cast<double>(total_observed)
                    : 0.0;
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace prs
