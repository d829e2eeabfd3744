#include "prs/model.hpp"

#include <cmath>

#include "prs/csv.hpp"
#include "prs/error.hpp"

namespace prs {

namespace {

constexpr double kProbEps = 1e-15;

double clamp01(double p) {
  if (p < kProbEps) return kProbEps;
  if (p > 1.0 - kProbEps) return 1.0 - kProbEps;
  return p;
}

double clamp(double v, double lo, double hi) {
  return v < lo ? lo : (v > hi ? hi : v);
}

double gbt_row(const GbtParams& g, const Eigen::MatrixXd& X, int row) {
  double z = g.base_score;
  for (const auto& tree : g.trees) {
    int idx = 0;
    while (!tree.nodes[idx].leaf) {
      const GbtNode& n = tree.nodes[idx];
      idx = X(row, n.feature) < n.threshold ? n.left : n.right;
    }
    z += tree.nodes[idx].value;
  }
  return 1.0 / (1.0 + std::exp(-z));
}

}  // namespace

std::string model_kind_token(ModelKind k) {
  return k == ModelKind::Cloglog ? "cloglog" : "gbt";
}

ModelKind parse_model_kind(const std::string& token) {
  if (token == "cloglog") return ModelKind::Cloglog;
  if (token == "gbt") return ModelKind::Gbt;
  throw PrsError("BadConfig", "unknown model kind '" + token + "'");
}

std::vector<double> predict_proba(const FittedModel& model,
                                  const ActionMatrix& m) {
  if (!(model.spec == m.spec))
    throw PrsError("SchemaMismatch",
                   "feature spec of the matrix does not match the model");
  const int H = m.rows();
  std::vector<double> out(static_cast<std::size_t>(H));
  if (model.kind == ModelKind::Cloglog) {
    const auto& c = model.glm.coefficients;
    if (static_cast<int>(c.size()) != m.cols() + 1)
      throw PrsError("SchemaMismatch", "coefficient count mismatch");
    for (int i = 0; i < H; ++i) {
      // Strict left-to-right accumulation: a model whose trailing
      // coefficients are exactly zero must reproduce the prefix model's
      // predictions bit for bit.
      double eta = c[0];
      for (int k = 0; k < m.cols(); ++k) eta += c[k + 1] * m.X(i, k);
      eta = clamp(eta, -30.0, 30.0);
      out[i] = clamp01(1.0 - std::exp(-std::exp(eta)));
    }
  } else {
    for (int i = 0; i < H; ++i) out[i] = clamp01(gbt_row(model.gbt, m.X, i));
  }
  return out;
}

std::vector<int> classify(std::span<const double> probs, double tau) {
  if (!(tau > 0.0 && tau < 1.0))
    throw PrsError("BadValue", "classification threshold must lie in (0, 1)");
  std::vector<int> out(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) out[i] = probs[i] >= tau;
  return out;
}

namespace {

nlohmann::json spec_to_json(const FeatureSpec& spec) {
  return {{"mode", feature_mode_token(spec.mode)}, {"columns", spec.columns}};
}

FeatureSpec spec_from_json(const nlohmann::json& j) {
  FeatureSpec spec;
  spec.mode = parse_feature_mode(j.at("mode").get<std::string>());
  spec.columns = j.at("columns").get<std::vector<std::string>>();
  return spec;
}

nlohmann::json meta_to_json(const TrainMeta& t) {
  return {{"iterations", t.iterations},
          {"converged", t.converged},
          {"separation_detected", t.separation_detected},
          {"hessian_jitter_applied", t.hessian_jitter_applied},
          {"hessian_jitter", t.hessian_jitter},
          {"degenerate_splits", t.degenerate_splits},
          {"notes", t.notes}};
}

TrainMeta meta_from_json(const nlohmann::json& j) {
  TrainMeta t;
  t.iterations = j.at("iterations").get<int>();
  t.converged = j.at("converged").get<bool>();
  t.separation_detected = j.at("separation_detected").get<bool>();
  t.hessian_jitter_applied = j.at("hessian_jitter_applied").get<bool>();
  t.hessian_jitter = j.at("hessian_jitter").get<double>();
  t.degenerate_splits = j.at("degenerate_splits").get<int>();
  t.notes = j.at("notes").get<std::string>();
  return t;
}

}  // namespace

nlohmann::json model_to_json(const FittedModel& model) {
  nlohmann::json j;
  j["kind"] = model_kind_token(model.kind);
  j["feature_spec"] = spec_to_json(model.spec);
  j["threshold"] = model.threshold;
  j["train_meta"] = meta_to_json(model.train_meta);
  if (model.kind == ModelKind::Cloglog) {
    j["glm"] = {{"coefficients", model.glm.coefficients},
                {"std_errors", model.glm.std_errors},
                {"config",
                 {{"ridge", model.glm.config.ridge},
                  {"max_iter", model.glm.config.max_iter},
                  {"tol", model.glm.config.tol},
                  {"coef_bound", model.glm.config.coef_bound},
                  {"jitter", model.glm.config.jitter}}}};
  } else {
    nlohmann::json trees = nlohmann::json::array();
    for (const auto& tree : model.gbt.trees) {
      nlohmann::json nodes = nlohmann::json::array();
      for (const auto& n : tree.nodes)
        nodes.push_back({{"leaf", n.leaf},
                         {"feature", n.feature},
                         {"threshold", n.threshold},
                         {"left", n.left},
                         {"right", n.right},
                         {"value", n.value},
                         {"gain", n.gain}});
      trees.push_back({{"nodes", std::move(nodes)}});
    }
    j["gbt"] = {{"base_score", model.gbt.base_score},
                {"trees", std::move(trees)},
                {"config",
                 {{"rounds", model.gbt.config.rounds},
                  {"learning_rate", model.gbt.config.learning_rate},
                  {"max_depth", model.gbt.config.max_depth},
                  {"subsample", model.gbt.config.subsample},
                  {"min_leaf", model.gbt.config.min_leaf},
                  {"seed", model.gbt.config.seed}}}};
  }
  return j;
}

FittedModel model_from_json(const nlohmann::json& j) {
  FittedModel model;
  model.kind = parse_model_kind(j.at("kind").get<std::string>());
  model.spec = spec_from_json(j.at("feature_spec"));
  model.threshold = j.at("threshold").get<double>();
  model.train_meta = meta_from_json(j.at("train_meta"));
  if (model.kind == ModelKind::Cloglog) {
    const auto& g = j.at("glm");
    model.glm.coefficients = g.at("coefficients").get<std::vector<double>>();
    model.glm.std_errors = g.at("std_errors").get<std::vector<double>>();
    const auto& c = g.at("config");
    model.glm.config.ridge = c.at("ridge").get<double>();
    model.glm.config.max_iter = c.at("max_iter").get<int>();
    model.glm.config.tol = c.at("tol").get<double>();
    model.glm.config.coef_bound = c.at("coef_bound").get<double>();
    model.glm.config.jitter = c.at("jitter").get<double>();
  } else {
    const auto& g = j.at("gbt");
    model.gbt.base_score = g.at("base_score").get<double>();
    const auto& c = g.at("config");
    model.gbt.config.rounds = c.at("rounds").get<int>();
    model.gbt.config.learning_rate = c.at("learning_rate").get<double>();
    model.gbt.config.max_depth = c.at("max_depth").get<int>();
    model.gbt.config.subsample = c.at("subsample").get<double>();
    model.gbt.config.min_leaf = c.at("min_leaf").get<int>();
    model.gbt.config.seed = c.at("seed").get<std::uint64_t>();
    for (const auto& tj : g.at("trees")) {
      GbtTree tree;
      for (const auto& nj : tj.at("nodes")) {
        GbtNode n;
        n.leaf = nj.at("leaf").get<bool>();
        n.feature = nj.at("feature").get<int>();
        n.threshold = nj.at("threshold").get<double>();
        n.left = nj.at("left").get<int>();
        n.right = nj.at("right").get<int>();
        n.value = nj.at("value").get<double>();
        n.gain = nj.at("gain").get<double>();
        tree.nodes.push_back(n);
      }
      model.gbt.trees.push_back(std::move(tree));
    }
  }
  return model;
}

void save_model(const std::string& path, const FittedModel& model) {
  write_file(path, model_to_json(model).dump(2) + "\n");
}

FittedModel load_model(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw PrsError("BadValue",
                   path + ": model artifact is not valid JSON: " + e.what());
  }
  try {
    return model_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw PrsError("BadValue",
                   path + ": model artifact missing fields: " + e.what());
  }
}

}  // namespace prs
