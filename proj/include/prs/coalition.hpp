#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "prs/dataset.hpp"
#include "prs/model.hpp"

namespace prs {

// Coalitions are bitmasks over a fixed-order team roster, so a team may have
// at most 64 players.  Bit i corresponds to roster.player_ids[i].
struct Roster {
  std::string team_id;
  std::vector<std::string> player_ids;  // dataset order

  int n() const { return static_cast<int>(player_ids.size()); }
  int index_of(const std::string& player_id) const;  // -1 if absent
};

Roster make_roster(const Dataset& ds, const std::string& team_id);

// Observed coalition -> indices into ds.actions of the actions it produced.
struct CoalitionMap {
  Roster roster;
  std::map<std::uint64_t, std::vector<int>> actions_by_coalition;

  bool observed(std::uint64_t mask) const {
    return actions_by_coalition.count(mask) != 0;
  }
};

CoalitionMap extract_coalitions(const Dataset& ds, const std::string& team_id);

struct SupportEntry {
  std::uint64_t mask = 0;  // coalition C, never containing the player
  bool observed = false;   // whether C itself was observed
};

// Support of player i: { S \ {i} : S observed, i in S }.  Every entry's union
// with {i} is observed by construction.  Throws EmptySupport when the player
// appears in no observed coalition.
std::vector<SupportEntry> player_support(const CoalitionMap& map, int player);

// Coalitions of the form S \ {i} (S observed, i in S) that are non-empty and
// were never observed themselves: the out-of-sample worths the attribution
// needs.  Sorted ascending.
std::vector<std::uint64_t> compatible_unobserved(const CoalitionMap& map);

// Feature means over a team's observed actions, used to give synthetic rows
// neutral values for everything a coalition's membership does not determine.
struct TeamStats {
  double x = 0.0, y = 0.0, shot_angle = 0.0;
  double first_pass_x = 0.0, first_pass_y = 0.0;
  double avg_pass_distance = 0.0;
};

TeamStats team_feature_means(const Dataset& ds, const CoalitionMap& map);

// Synthetic action for an unobserved coalition: membership determines
// players_nb (the size), pass_nb (size - 1), and the performance index (mean
// offensive index of the members); geometry falls back to team means,
// open play at home.
ShotAction synth_coalition_features(std::uint64_t mask, const Roster& roster,
                                    const TeamStats& stats, const Dataset& ds);

enum class WorthProvenance { Empty, Observed, UnobservedOutOfSample };

struct WorthEntry {
  std::uint64_t mask = 0;
  double worth = 0.0;
  WorthProvenance provenance = WorthProvenance::Empty;
  int action_count = 0;
};

struct WorthOptions {
  bool observed_mean = false;  // mean instead of sum over observed actions
  double scale = 1.0;          // affine hook: worth -> scale * worth + shift
  double shift = 0.0;
};

struct WorthTable {
  std::map<std::uint64_t, WorthEntry> entries;

  std::optional<double> worth(std::uint64_t mask) const;
};

// Characteristic function over {empty} + observed + compatible-unobserved
// coalitions.  Observed worth is the sum (or mean) of the model's in-sample
// probabilities over the coalition's actions; unobserved worth is one
// out-of-sample prediction on the synthetic row; the empty coalition is 0.
// The affine hook is applied to every entry.  The model must be an XGA fit.
WorthTable estimate_worth(const Dataset& ds, const CoalitionMap& map,
                          const FittedModel& model,
                          const WorthOptions& opts = {});

struct DistRow {
  int cardinality = 0;
  std::string all_count;  // C(n, k), exact decimal string
  double all_pct = 0.0;
  long observed = 0;
  double obs_pct = 0.0;
};

// Cardinality profile of the observed coalitions against the full count of
// possible coalitions of each size 1..k_max, binomials computed exactly.
std::vector<DistRow> coalition_distribution(const CoalitionMap& map, int n,
                                            int k_max);

std::string u128_to_string(unsigned __int128 v);

}  // namespace prs
