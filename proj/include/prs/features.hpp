#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "prs/dataset.hpp"

namespace prs {

// XG uses only shot geometry; XGA prepends the same three columns and adds
// the build-up context, so an XG design is always a prefix of the XGA design
// for the same actions.  Custom exists for hand-built test matrices.
enum class FeatureMode { XG, XGA, Custom };

std::string feature_mode_token(FeatureMode m);
FeatureMode parse_feature_mode(const std::string& token);

struct FeatureSpec {
  FeatureMode mode = FeatureMode::XG;
  std::vector<std::string> columns;

  static FeatureSpec xg();
  static FeatureSpec xga();
  static FeatureSpec custom(std::vector<std::string> columns);

  int k() const { return static_cast<int>(columns.size()); }
  bool operator==(const FeatureSpec&) const = default;
};

struct ActionMatrix {
  FeatureSpec spec;
  Eigen::MatrixXd X;           // rows x spec.k()
  Eigen::VectorXi y;           // 0/1 outcomes
  std::vector<std::string> row_keys;  // action ids, aligned with rows

  int rows() const { return static_cast<int>(X.rows()); }
  int cols() const { return static_cast<int>(X.cols()); }
};

// Encodes actions into the design matrix for the given mode.  Dummy coding:
// h_a_home = 1 for home; situation uses open_play as the reference level with
// one indicator each for free_kick, penalty and other.  Throws BadValue on a
// non-finite feature.
ActionMatrix build_features(std::span<const ShotAction> actions,
                            const FeatureSpec& spec);

}  // namespace prs
