#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "prs/features.hpp"

namespace prs {

enum class ModelKind { Cloglog, Gbt };

std::string model_kind_token(ModelKind k);
ModelKind parse_model_kind(const std::string& token);

struct CloglogConfig {
  double ridge = 0.0;
  int max_iter = 100;
  double tol = 1e-8;
  double coef_bound = 30.0;  // |beta| beyond this flags quasi-separation
  double jitter = 1e-8;      // initial diagonal bump for a singular Hessian
};

struct GbtConfig {
  int rounds = 200;
  double learning_rate = 0.1;
  int max_depth = 3;
  double subsample = 0.8;
  int min_leaf = 10;
  std::uint64_t seed = 0;
};

struct GlmParams {
  std::vector<double> coefficients;  // [intercept, per-column...]
  std::vector<double> std_errors;    // same layout
  CloglogConfig config;
};

struct GbtNode {
  bool leaf = true;
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf weight, already scaled by the learning rate
  double gain = 0.0;   // split gain, kept for importance
};

struct GbtTree {
  std::vector<GbtNode> nodes;  // nodes[0] is the root
};

struct GbtParams {
  double base_score = 0.0;  // initial margin (log-odds of prevalence)
  std::vector<GbtTree> trees;
  GbtConfig config;
};

struct TrainMeta {
  int iterations = 0;
  bool converged = true;
  bool separation_detected = false;
  bool hessian_jitter_applied = false;
  double hessian_jitter = 0.0;
  int degenerate_splits = 0;  // split searches that found no improving split
  std::string notes;
};

struct FittedModel {
  ModelKind kind = ModelKind::Cloglog;
  FeatureSpec spec;
  double threshold = 0.5;  // training prevalence; default classify cut
  TrainMeta train_meta;
  GlmParams glm;
  GbtParams gbt;
};

// Probabilities in (0, 1), one per row.  The feature spec of the matrix must
// equal the model's (SchemaMismatch otherwise).  GLM linear predictors are
// accumulated left to right in column order, so a model whose trailing
// coefficients are exactly zero reproduces the prefix model bit for bit.
std::vector<double> predict_proba(const FittedModel& model,
                                  const ActionMatrix& m);

// 1 where p >= tau.  tau must lie in (0, 1).
std::vector<int> classify(std::span<const double> probs, double tau);

nlohmann::json model_to_json(const FittedModel& model);
FittedModel model_from_json(const nlohmann::json& j);
void save_model(const std::string& path, const FittedModel& model);
FittedModel load_model(const std::string& path);

}  // namespace prs
