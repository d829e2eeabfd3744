#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "prs/bootstrap_eval.hpp"
#include "prs/dataset.hpp"
#include "prs/inference.hpp"
#include "prs/parallel.hpp"

namespace prs {

// One JSON file configures every command.  Unknown keys are rejected so a
// typo cannot silently fall back to a default.
struct RunConfig {
  // paths
  std::string actions_path;
  std::string players_path;
  std::string out_dir = "out";

  // model
  LearnerConfig model;                        // kind + per-learner settings
  FeatureMode worth_mode = FeatureMode::XGA;  // only XGA is valid for worth

  // filter
  int min_actions = 60;
  bool strict = true;
  AliasTables aliases;

  // bootstrap (PRS inference)
  BootstrapConfig bootstrap;

  // shapley
  std::optional<int> n_override;
  WorthOptions worth;

  // evaluate
  int eval_B = 200;

  // exec
  ExecMode exec = ExecMode::OpenMP;
  int threads = 0;  // 0 = library default

  // synth
  SynthConfig synth;

  // teams to process; empty = all teams in the dataset
  std::vector<std::string> teams;

  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;  // fully resolved, defaults included
  static RunConfig load(const std::string& path);
};

}  // namespace prs
