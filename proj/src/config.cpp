#include "prs/config.hpp"

#include <cctype>
#include <set>

#include "prs/csv.hpp"

namespace prs {

namespace {

void reject_unknown_keys(const nlohmann::json& j, const std::string& where,
                         const std::set<std::string>& allowed) {
  if (!j.is_object())
    throw PrsError("BadConfig", where + " must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key))
      throw PrsError("BadConfig", where + ": unknown key '" + key + "'");
}

template <typename T>
void get_if(const nlohmann::json& j, const char* key, T& out,
            const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw PrsError("BadConfig",
                   where + ": wrong type for '" + std::string(key) + "'");
  }
}

ExecMode parse_exec_mode(const std::string& token) {
  if (token == "serial") return ExecMode::Serial;
  if (token == "openmp") return ExecMode::OpenMP;
  throw PrsError("BadConfig", "unknown exec mode '" + token + "'");
}

std::string exec_mode_token(ExecMode m) {
  return m == ExecMode::Serial ? "serial" : "openmp";
}

std::map<std::string, std::string> parse_alias_map(
    const nlohmann::json& j, const std::string& where,
    const std::set<std::string>& canonical) {
  std::map<std::string, std::string> out;
  if (!j.is_object())
    throw PrsError("BadConfig", where + " must map tokens to canonical names");
  for (const auto& [key, value] : j.items()) {
    if (!value.is_string())
      throw PrsError("BadConfig", where + ": alias target must be a string");
    std::string target = value.get<std::string>();
    for (char& c : target)
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (!canonical.count(target))
      throw PrsError("BadConfig", where + ": '" + target +
                                      "' is not a canonical token");
    std::string k = key;
    for (char& c : k)
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    out[k] = target;
  }
  return out;
}

}  // namespace

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig cfg;
  reject_unknown_keys(j, "config",
                      {"paths", "model", "filter", "bootstrap", "shapley",
                       "evaluate", "exec", "synth", "teams"});

  if (j.contains("paths")) {
    const auto& p = j.at("paths");
    reject_unknown_keys(p, "paths", {"actions", "players", "out_dir"});
    get_if(p, "actions", cfg.actions_path, "paths");
    get_if(p, "players", cfg.players_path, "paths");
    get_if(p, "out_dir", cfg.out_dir, "paths");
  }

  if (j.contains("model")) {
    const auto& m = j.at("model");
    reject_unknown_keys(m, "model", {"kind", "mode", "cloglog", "gbt"});
    std::string kind = model_kind_token(cfg.model.kind);
    get_if(m, "kind", kind, "model");
    cfg.model.kind = parse_model_kind(kind);
    std::string mode = feature_mode_token(cfg.worth_mode);
    get_if(m, "mode", mode, "model");
    cfg.worth_mode = parse_feature_mode(mode);
    if (m.contains("cloglog")) {
      const auto& c = m.at("cloglog");
      reject_unknown_keys(c, "model.cloglog",
                          {"ridge", "max_iter", "tol", "coef_bound", "jitter"});
      get_if(c, "ridge", cfg.model.glm.ridge, "model.cloglog");
      get_if(c, "max_iter", cfg.model.glm.max_iter, "model.cloglog");
      get_if(c, "tol", cfg.model.glm.tol, "model.cloglog");
      get_if(c, "coef_bound", cfg.model.glm.coef_bound, "model.cloglog");
      get_if(c, "jitter", cfg.model.glm.jitter, "model.cloglog");
    }
    if (m.contains("gbt")) {
      const auto& g = m.at("gbt");
      reject_unknown_keys(g, "model.gbt",
                          {"rounds", "learning_rate", "max_depth", "subsample",
                           "min_leaf", "seed"});
      get_if(g, "rounds", cfg.model.gbt.rounds, "model.gbt");
      get_if(g, "learning_rate", cfg.model.gbt.learning_rate, "model.gbt");
      get_if(g, "max_depth", cfg.model.gbt.max_depth, "model.gbt");
      get_if(g, "subsample", cfg.model.gbt.subsample, "model.gbt");
      get_if(g, "min_leaf", cfg.model.gbt.min_leaf, "model.gbt");
      get_if(g, "seed", cfg.model.gbt.seed, "model.gbt");
    }
  }

  if (j.contains("filter")) {
    const auto& f = j.at("filter");
    reject_unknown_keys(f, "filter",
                        {"min_actions", "strict", "situation_aliases",
                         "role_aliases"});
    get_if(f, "min_actions", cfg.min_actions, "filter");
    if (cfg.min_actions < 0)
      throw PrsError("BadConfig", "filter.min_actions must be >= 0");
    get_if(f, "strict", cfg.strict, "filter");
    if (f.contains("situation_aliases"))
      cfg.aliases.situation =
          parse_alias_map(f.at("situation_aliases"), "filter.situation_aliases",
                          {"open_play", "free_kick", "penalty", "other"});
    if (f.contains("role_aliases"))
      cfg.aliases.role = parse_alias_map(f.at("role_aliases"),
                                         "filter.role_aliases",
                                         {"gk", "def", "mid", "for"});
  }

  if (j.contains("bootstrap")) {
    const auto& b = j.at("bootstrap");
    reject_unknown_keys(b, "bootstrap",
                        {"B", "base_seed", "refit_model", "retry_limit",
                         "ci_level"});
    get_if(b, "B", cfg.bootstrap.B, "bootstrap");
    get_if(b, "base_seed", cfg.bootstrap.base_seed, "bootstrap");
    get_if(b, "refit_model", cfg.bootstrap.refit_model, "bootstrap");
    get_if(b, "retry_limit", cfg.bootstrap.retry_limit, "bootstrap");
    get_if(b, "ci_level", cfg.bootstrap.ci_level, "bootstrap");
    if (cfg.bootstrap.B < 2)
      throw PrsError("BadConfig", "bootstrap.B must be >= 2");
    if (!(cfg.bootstrap.ci_level > 0.0 && cfg.bootstrap.ci_level < 1.0))
      throw PrsError("BadConfig", "bootstrap.ci_level must lie in (0, 1)");
  }

  if (j.contains("shapley")) {
    const auto& s = j.at("shapley");
    reject_unknown_keys(s, "shapley",
                        {"n_override", "observed_worth", "worth_scale",
                         "worth_shift"});
    if (s.contains("n_override")) {
      int n = 0;
      get_if(s, "n_override", n, "shapley");
      if (n < 1) throw PrsError("BadConfig", "shapley.n_override must be >= 1");
      cfg.n_override = n;
    }
    if (s.contains("observed_worth")) {
      std::string ow;
      get_if(s, "observed_worth", ow, "shapley");
      if (ow == "sum") cfg.worth.observed_mean = false;
      else if (ow == "mean") cfg.worth.observed_mean = true;
      else
        throw PrsError("BadConfig",
                       "shapley.observed_worth must be 'sum' or 'mean'");
    }
    get_if(s, "worth_scale", cfg.worth.scale, "shapley");
    get_if(s, "worth_shift", cfg.worth.shift, "shapley");
    if (!(cfg.worth.scale > 0.0))
      throw PrsError("BadConfig", "shapley.worth_scale must be positive");
  }

  if (j.contains("evaluate")) {
    const auto& e = j.at("evaluate");
    reject_unknown_keys(e, "evaluate", {"B"});
    get_if(e, "B", cfg.eval_B, "evaluate");
    if (cfg.eval_B < 2)
      throw PrsError("BadConfig", "evaluate.B must be >= 2");
  }

  if (j.contains("exec")) {
    const auto& e = j.at("exec");
    reject_unknown_keys(e, "exec", {"mode", "threads"});
    std::string mode = exec_mode_token(cfg.exec);
    get_if(e, "mode", mode, "exec");
    cfg.exec = parse_exec_mode(mode);
    get_if(e, "threads", cfg.threads, "exec");
    if (cfg.threads < 0)
      throw PrsError("BadConfig", "exec.threads must be >= 0");
  }

  if (j.contains("synth")) {
    const auto& s = j.at("synth");
    reject_unknown_keys(s, "synth",
                        {"seed", "n_teams", "players_per_team",
                         "actions_per_team", "goal_prevalence"});
    get_if(s, "seed", cfg.synth.seed, "synth");
    get_if(s, "n_teams", cfg.synth.n_teams, "synth");
    get_if(s, "players_per_team", cfg.synth.players_per_team, "synth");
    get_if(s, "actions_per_team", cfg.synth.actions_per_team, "synth");
    get_if(s, "goal_prevalence", cfg.synth.goal_prevalence, "synth");
  }

  get_if(j, "teams", cfg.teams, "config");
  return cfg;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["paths"] = {{"actions", actions_path},
                {"players", players_path},
                {"out_dir", out_dir}};
  j["model"] = {{"kind", model_kind_token(model.kind)},
                {"mode", feature_mode_token(worth_mode)},
                {"cloglog",
                 {{"ridge", model.glm.ridge},
                  {"max_iter", model.glm.max_iter},
                  {"tol", model.glm.tol},
                  {"coef_bound", model.glm.coef_bound},
                  {"jitter", model.glm.jitter}}},
                {"gbt",
                 {{"rounds", model.gbt.rounds},
                  {"learning_rate", model.gbt.learning_rate},
                  {"max_depth", model.gbt.max_depth},
                  {"subsample", model.gbt.subsample},
                  {"min_leaf", model.gbt.min_leaf},
                  {"seed", model.gbt.seed}}}};
  j["filter"] = {{"min_actions", min_actions},
                 {"strict", strict},
                 {"situation_aliases", aliases.situation},
                 {"role_aliases", aliases.role}};
  j["bootstrap"] = {{"B", bootstrap.B},
                    {"base_seed", bootstrap.base_seed},
                    {"refit_model", bootstrap.refit_model},
                    {"retry_limit", bootstrap.retry_limit},
                    {"ci_level", bootstrap.ci_level}};
  j["shapley"] = {{"observed_worth", worth.observed_mean ? "mean" : "sum"},
                  {"worth_scale", worth.scale},
                  {"worth_shift", worth.shift}};
  if (n_override) j["shapley"]["n_override"] = *n_override;
  j["evaluate"] = {{"B", eval_B}};
  j["exec"] = {{"mode", exec == ExecMode::Serial ? "serial" : "openmp"},
               {"threads", threads}};
  j["synth"] = {{"seed", synth.seed},
                {"n_teams", synth.n_teams},
                {"players_per_team", synth.players_per_team},
                {"actions_per_team", synth.actions_per_team},
                {"goal_prevalence", synth.goal_prevalence}};
  j["teams"] = teams;
  return j;
}

RunConfig RunConfig::load(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw PrsError("ConfigParse", path + ": " + e.what());
  }
  return from_json(j);
}

}  // namespace prs
