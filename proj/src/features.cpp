#include "prs/features.hpp"

#include <cmath>

#include "prs/error.hpp"

namespace prs {

std::string feature_mode_token(FeatureMode m) {
  switch (m) {
    case FeatureMode::XG: return "xg";
    case FeatureMode::XGA: return "xga";
    case FeatureMode::Custom: return "custom";
  }
  return "xg";
}

FeatureMode parse_feature_mode(const std::string& token) {
  if (token == "xg") return FeatureMode::XG;
  if (token == "xga") return FeatureMode::XGA;
  if (token == "custom") return FeatureMode::Custom;
  throw PrsError("BadConfig", "unknown feature mode '" + token + "'");
}

FeatureSpec FeatureSpec::xg() {
  return {FeatureMode::XG, {"x", "y", "shot_angle"}};
}

FeatureSpec FeatureSpec::xga() {
  return {FeatureMode::XGA,
          {"x", "y", "shot_angle", "first_pass_x", "first_pass_y", "pass_nb",
           "players_nb", "avg_pass_distance", "pl_performance_index",
           "h_a_home", "situation_free_kick", "situation_penalty",
           "situation_other"}};
}

FeatureSpec FeatureSpec::custom(std::vector<std::string> columns) {
  return {FeatureMode::Custom, std::move(columns)};
}

ActionMatrix build_features(std::span<const ShotAction> actions,
                            const FeatureSpec& spec) {
  if (spec.mode == FeatureMode::Custom)
    throw PrsError("BadConfig", "cannot build features for a custom spec");
  const int K = spec.k();
  ActionMatrix m;
  m.spec = spec;
  m.X.resize(static_cast<Eigen::Index>(actions.size()), K);
  m.y.resize(static_cast<Eigen::Index>(actions.size()));
  m.row_keys.reserve(actions.size());

  for (std::size_t i = 0; i < actions.size(); ++i) {
    const ShotAction& a = actions[i];
    const Eigen::Index r = static_cast<Eigen::Index>(i);
    m.X(r, 0) = a.x;
    m.X(r, 1) = a.y;
    m.X(r, 2) = a.shot_angle;
    if (spec.mode == FeatureMode::XGA) {
      m.X(r, 3) = a.first_pass_x;
      m.X(r, 4) = a.first_pass_y;
      m.X(r, 5) = static_cast<double>(a.pass_nb);
      m.X(r, 6) = static_cast<double>(a.players_nb);
      m.X(r, 7) = a.avg_pass_distance;
      m.X(r, 8) = a.pl_performance_index;
      m.X(r, 9) = a.h_a == Venue::Home ? 1.0 : 0.0;
      m.X(r, 10) = a.situation == Situation::FreeKick ? 1.0 : 0.0;
      m.X(r, 11) = a.situation == Situation::Penalty ? 1.0 : 0.0;
      m.X(r, 12) = a.situation == Situation::Other ? 1.0 : 0.0;
    }
    for (int k = 0; k < K; ++k)
      if (!std::isfinite(m.X(r, k)))
        throw PrsError("BadValue", "non-finite feature '" + spec.columns[k] +
                                       "' at action " + a.action_id);
    m.y(r) = a.outcome;
    m.row_keys.push_back(a.action_id);
  }
  return m;
}

}  // namespace prs
