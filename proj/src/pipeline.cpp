#include "prs/pipeline.hpp"

#include <bit>
#include <cctype>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "prs/csv.hpp"
#include "prs/gbt.hpp"
#include "prs/glm.hpp"
#include "prs/metrics.hpp"
#include "prs/rng.hpp"
#include "prs/stats.hpp"

namespace prs {

namespace {

std::string sanitize(const std::string& id) {
  std::string out;
  for (char c : id)
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out;
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

LoadOptions load_options(const RunConfig& cfg,
                         std::vector<std::string>* warnings) {
  LoadOptions opts;
  opts.aliases = cfg.aliases;
  opts.strict = cfg.strict;
  opts.warnings = warnings;
  return opts;
}

Dataset load_filtered(const RunConfig& cfg,
                      std::vector<std::string>* warnings) {
  if (cfg.actions_path.empty() || cfg.players_path.empty())
    throw PrsError("MissingFile",
                   "paths.actions and paths.players must be configured");
  Dataset ds =
      load_dataset(cfg.actions_path, cfg.players_path, load_options(cfg, warnings));
  return filter_dataset(ds, cfg.min_actions);
}

// Teams to process: the configured list verbatim, otherwise every team that
// still has players and actions after filtering.
std::vector<std::string> selected_teams(const RunConfig& cfg,
                                        const Dataset& ds) {
  if (!cfg.teams.empty()) return cfg.teams;
  std::set<std::string> with_players, with_actions;
  for (const auto& p : ds.players) with_players.insert(p.team_id);
  for (const auto& a : ds.actions) with_actions.insert(a.team_id);
  std::vector<std::string> out;
  for (const auto& t : with_players)
    if (with_actions.count(t)) out.push_back(t);
  if (out.empty())
    throw PrsError("EmptyResult", "no team survives the exclusion cascade");
  return out;
}

void apply_exec(const RunConfig& cfg) {
#ifdef _OPENMP
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#endif
}

std::string flag_string(const PrsRow& row) {
  std::vector<std::string> flags;
  if (row.degenerate) flags.push_back("degenerate_se");
  if (row.missing_replications > 0)
    flags.push_back("missing_replications:" +
                    std::to_string(row.missing_replications));
  std::string out;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (i) out.push_back(';');
    out += flags[i];
  }
  return out;
}

void write_coalition_csv(const std::string& path, const CoalitionMap& map) {
  const int n = map.roster.n();
  int max_card = 0;
  for (const auto& [mask, rows] : map.actions_by_coalition)
    max_card = std::max(max_card, std::popcount(mask));
  const int k_max = std::min(n, std::max(10, max_card));
  const auto dist = coalition_distribution(map, n, k_max);

  std::vector<std::vector<std::string>> rows;
  unsigned __int128 total_all = 0;
  long total_obs = 0;
  for (const auto& r : dist) {
    rows.push_back({format_int(r.cardinality), r.all_count,
                    format_double(r.all_pct), format_int(r.observed),
                    format_double(r.obs_pct)});
    unsigned __int128 v = 0;
    for (char c : r.all_count) v = v * 10 + static_cast<unsigned>(c - '0');
    total_all += v;
    total_obs += r.observed;
  }
  rows.push_back({"total", u128_to_string(total_all), "100", format_int(total_obs),
                  "100"});
  write_csv(path, {"cardinality", "all", "all_pct", "observed", "observed_pct"},
            rows);
}

struct MetricsBlock {
  std::vector<std::vector<std::string>> rows;

  void add(const std::string& model, const std::string& mode,
           const OobEval& ev) {
    auto push = [&](const std::string& name, double est, double se) {
      rows.push_back({model, mode, name, format_double(est),
                      format_double(se)});
    };
    push("sensitivity", ev.mean.sensitivity, ev.se.sensitivity);
    push("specificity", ev.mean.specificity, ev.se.specificity);
    push("precision", ev.mean.precision, ev.se.precision);
    push("f1", ev.mean.f1, ev.se.f1);
    push("mcc", ev.mean.mcc, ev.se.mcc);
    push("auc", ev.mean.auc, ev.se.auc);
    push("brier", ev.mean.brier, ev.se.brier);
    rows.push_back({model, mode, "oob_fraction",
                    format_double(ev.mean_oob_fraction), ""});
  }
};

// The four learner/mode combinations evaluated out of bag.
void write_metrics_csv(const std::string& path, const Dataset& ds,
                       const RunConfig& cfg) {
  MetricsBlock block;
  int combo = 0;
  for (ModelKind kind : {ModelKind::Cloglog, ModelKind::Gbt}) {
    for (FeatureMode mode : {FeatureMode::XG, FeatureMode::XGA}) {
      const FeatureSpec spec =
          mode == FeatureMode::XG ? FeatureSpec::xg() : FeatureSpec::xga();
      const ActionMatrix m = build_features(ds.actions, spec);
      LearnerConfig lc = cfg.model;
      lc.kind = kind;
      const OobEval ev =
          oob_bootstrap_eval(m, lc, cfg.eval_B,
                             mix_seed(cfg.bootstrap.base_seed, combo, kSaltEval),
                             cfg.exec);
      block.add(model_kind_token(kind), feature_mode_token(mode), ev);
      ++combo;
    }
  }
  write_csv(path, {"model", "mode", "metric", "estimate", "se"}, block.rows);
}

std::string iso_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json filter_log_json(const Dataset& ds) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& step : ds.filter_log)
    out.push_back({{"step", step.step},
                   {"scope", step.scope},
                   {"before", step.before},
                   {"after", step.after},
                   {"note", step.note}});
  return out;
}

}  // namespace

void cmd_validate(const RunConfig& cfg, std::ostream& out) {
  std::vector<std::string> warnings;
  if (cfg.actions_path.empty() || cfg.players_path.empty())
    throw PrsError("MissingFile",
                   "paths.actions and paths.players must be configured");
  Dataset raw = load_dataset(cfg.actions_path, cfg.players_path,
                             load_options(cfg, &warnings));
  Dataset ds = filter_dataset(raw, cfg.min_actions);

  out << "players: " << raw.players.size() << " loaded, " << ds.players.size()
      << " after filter\n";
  out << "actions: " << raw.actions.size() << " loaded, " << ds.actions.size()
      << " after filter\n";
  for (const auto& step : ds.filter_log)
    out << "filter: " << step.step << " " << step.scope << " " << step.before
        << " -> " << step.after
        << (step.note.empty() ? "" : " (" + step.note + ")") << "\n";
  for (const auto& team : selected_teams(cfg, ds)) {
    const CoalitionMap map = extract_coalitions(ds, team);
    std::size_t actions = 0;
    for (const auto& [mask, rows] : map.actions_by_coalition)
      actions += rows.size();
    out << "team " << team << ": roster " << map.roster.n() << ", actions "
        << actions << ", observed coalitions "
        << map.actions_by_coalition.size() << ", compatible unobserved "
        << compatible_unobserved(map).size() << "\n";
  }
  for (const auto& w : warnings) out << "warning: " << w << "\n";
  out << "ok\n";
}

void cmd_synth(const RunConfig& cfg, std::ostream& out) {
  SynthMeta meta;
  const Dataset ds = generate_synthetic(cfg.synth, &meta);
  const std::string actions_path = cfg.actions_path.empty()
                                       ? join_path(cfg.out_dir, "actions.csv")
                                       : cfg.actions_path;
  const std::string players_path = cfg.players_path.empty()
                                       ? join_path(cfg.out_dir, "players.csv")
                                       : cfg.players_path;
  save_actions(actions_path, ds.actions);
  save_players(players_path, ds.players);

  nlohmann::json mj;
  mj["seed"] = meta.config.seed;
  mj["n_teams"] = meta.config.n_teams;
  mj["players_per_team"] = meta.config.players_per_team;
  mj["actions_per_team"] = meta.config.actions_per_team;
  mj["goal_prevalence"] = meta.config.goal_prevalence;
  mj["intercept"] = meta.intercept;
  mj["coefficients"] = meta.coefficients;
  mj["empirical_prevalence"] = meta.empirical_prevalence;
  const std::string meta_path =
      (std::filesystem::path(actions_path).parent_path() / "meta.json")
          .string();
  write_file(meta_path, mj.dump(2) + "\n");

  out << "actions: " << ds.actions.size() << " -> " << actions_path << "\n";
  out << "players: " << ds.players.size() << " -> " << players_path << "\n";
  out << "meta: " << meta_path << "\n";
  out << "empirical prevalence: " << format_double(meta.empirical_prevalence)
      << "\n";
}

void cmd_train(const RunConfig& cfg, std::ostream& out) {
  apply_exec(cfg);
  const Dataset ds = load_filtered(cfg, nullptr);
  const FeatureSpec spec = cfg.worth_mode == FeatureMode::XG
                               ? FeatureSpec::xg()
                               : FeatureSpec::xga();
  const ActionMatrix m = build_features(ds.actions, spec);
  const FittedModel model =
      fit_learner(m, cfg.model, mix_seed(cfg.bootstrap.base_seed, 0, kSaltModel));
  const std::string path = join_path(cfg.out_dir, "model.json");
  save_model(path, model);

  const std::vector<double> p = predict_proba(model, m);
  std::vector<int> yy(m.y.data(), m.y.data() + m.rows());
  const MetricReport r = evaluate_metrics(yy, p, model.threshold);
  out << "model: " << model_kind_token(model.kind) << " on "
      << feature_mode_token(spec.mode) << " features -> " << path << "\n";
  out << "rows: " << m.rows() << ", prevalence: "
      << format_double(model.threshold) << "\n";
  out << "in-sample auc: " << format_double(r.auc)
      << ", brier: " << format_double(r.brier) << "\n";
  if (model.train_meta.separation_detected)
    out << "warning: separation detected (a coefficient exceeds the bound)\n";
  if (model.train_meta.hessian_jitter_applied)
    out << "note: Hessian stabilized with jitter "
        << format_double(model.train_meta.hessian_jitter) << "\n";
}

void cmd_evaluate(const RunConfig& cfg, std::ostream& out) {
  apply_exec(cfg);
  const Dataset ds = load_filtered(cfg, nullptr);

  const std::string metrics_path = join_path(cfg.out_dir, "metrics.csv");
  write_metrics_csv(metrics_path, ds, cfg);
  out << "metrics -> " << metrics_path << "\n";

  // VIF over the XGA design; columns left constant by the exclusion cascade
  // (penalties are filtered out) are reported but not regressed.
  const ActionMatrix xga = build_features(ds.actions, FeatureSpec::xga());
  std::vector<int> keep;
  std::vector<std::string> constant_cols;
  for (int k = 0; k < xga.cols(); ++k) {
    if (xga.X.col(k).minCoeff() == xga.X.col(k).maxCoeff())
      constant_cols.push_back(xga.spec.columns[k]);
    else
      keep.push_back(k);
  }
  std::vector<std::vector<std::string>> vif_rows;
  if (keep.size() >= 2) {
    ActionMatrix sub;
    std::vector<std::string> names;
    for (int k : keep) names.push_back(xga.spec.columns[k]);
    sub.spec = FeatureSpec::custom(names);
    sub.X.resize(xga.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i)
      sub.X.col(static_cast<Eigen::Index>(i)) = xga.X.col(keep[i]);
    sub.y = xga.y;
    const VifResult vif = compute_vif(sub);
    for (std::size_t i = 0; i < vif.vif.size(); ++i)
      vif_rows.push_back(
          {vif.columns[i],
           std::isinf(vif.vif[i]) ? "inf" : format_double(vif.vif[i]),
           vif.status[i] == VifStatus::ExactCollinear ? "exact_collinear"
                                                      : ""});
  }
  for (const auto& name : constant_cols)
    vif_rows.push_back({name, "", "constant"});
  const std::string vif_path = join_path(cfg.out_dir, "vif.csv");
  write_csv(vif_path, {"column", "vif", "flag"}, vif_rows);
  out << "vif -> " << vif_path << "\n";

  const int imp_B = std::max(100, cfg.eval_B);
  for (ModelKind kind : {ModelKind::Cloglog, ModelKind::Gbt}) {
    LearnerConfig lc = cfg.model;
    lc.kind = kind;
    const FittedModel model = fit_learner(
        xga, lc, mix_seed(cfg.bootstrap.base_seed, 10 + static_cast<int>(kind),
                          kSaltModel));
    const auto rows =
        feature_importance(model, xga, imp_B,
                           mix_seed(cfg.bootstrap.base_seed,
                                    20 + static_cast<int>(kind), kSaltEval),
                           cfg.exec, cfg.bootstrap.ci_level);
    std::vector<std::vector<std::string>> csv;
    for (const auto& r : rows)
      csv.push_back({r.feature, format_double(r.estimate),
                     format_double(r.std_estimate), format_double(r.ci_low),
                     format_double(r.ci_high)});
    const std::string path = join_path(
        cfg.out_dir, "importance_" + model_kind_token(kind) + ".csv");
    write_csv(path, {"feature", "estimate", "std_estimate", "ci_low", "ci_high"},
              csv);
    out << "importance (" << model_kind_token(kind) << ") -> " << path << "\n";
  }
}

void cmd_coalitions(const RunConfig& cfg, std::ostream& out) {
  const Dataset ds = load_filtered(cfg, nullptr);
  for (const auto& team : selected_teams(cfg, ds)) {
    const CoalitionMap map = extract_coalitions(ds, team);
    const std::string path =
        join_path(cfg.out_dir, "coalitions_" + sanitize(team) + ".csv");
    write_coalition_csv(path, map);
    out << "team " << team << ": " << map.actions_by_coalition.size()
        << " observed coalitions -> " << path << "\n";
  }
}

void cmd_run_prs(const RunConfig& cfg, std::ostream& out) {
  apply_exec(cfg);
  const auto t_start = std::chrono::steady_clock::now();
  if (cfg.worth_mode != FeatureMode::XGA)
    throw PrsError("BadConfig",
                   "the attribution pipeline requires model.mode = \"xga\"");

  std::vector<std::string> written;  // artifact names relative to out_dir
  auto emit = [&](const std::string& name) { written.push_back(name); };

  write_file(join_path(cfg.out_dir, "config_resolved.json"),
             cfg.to_json().dump(2) + "\n");
  emit("config_resolved.json");

  std::vector<std::string> warnings;
  const Dataset ds = load_filtered(cfg, &warnings);
  const std::vector<std::string> teams = selected_teams(cfg, ds);

  // Worth model on the full filtered league.
  const ActionMatrix league = build_features(ds.actions, FeatureSpec::xga());
  const FittedModel worth_model = fit_learner(
      league, cfg.model, mix_seed(cfg.bootstrap.base_seed, 0, kSaltModel));
  save_model(join_path(cfg.out_dir, "model_xga.json"), worth_model);
  emit("model_xga.json");

  // Shot-quality model for the efficiency axis of the scatter.
  const ActionMatrix league_xg = build_features(ds.actions, FeatureSpec::xg());
  const FittedModel xg_model = fit_learner(
      league_xg, cfg.model, mix_seed(cfg.bootstrap.base_seed, 1, kSaltModel));
  save_model(join_path(cfg.out_dir, "model_xg.json"), xg_model);
  emit("model_xg.json");

  const auto t_models = std::chrono::steady_clock::now();

  std::vector<WorthProblem> problems;
  problems.reserve(teams.size());
  nlohmann::json team_stats = nlohmann::json::object();
  for (const auto& team : teams) {
    const CoalitionMap map = extract_coalitions(ds, team);
    const std::string cpath =
        join_path(cfg.out_dir, "coalitions_" + sanitize(team) + ".csv");
    write_coalition_csv(cpath, map);
    emit("coalitions_" + sanitize(team) + ".csv");
    problems.push_back(build_worth_problem(ds, team, cfg.n_override));
    const WorthProblem& pr = problems.back();
    std::size_t action_total = 0;
    for (const auto& [mask, rows] : map.actions_by_coalition)
      action_total += rows.size();
    team_stats[team] = {{"roster", pr.roster.n()},
                        {"actions", action_total},
                        {"observed_coalitions", map.actions_by_coalition.size()},
                        {"unobserved_compatible", pr.synth_matrix.rows()}};
  }

  // Point attribution from the full-sample model.
  const std::vector<double> p_league = predict_proba(worth_model, league);
  std::vector<std::vector<std::optional<double>>> phi_points;
  for (const auto& problem : problems) {
    std::vector<double> p_synth;
    if (problem.synth_matrix.rows() > 0)
      p_synth = predict_proba(worth_model, problem.synth_matrix);
    const auto worths =
        worth_values(problem, p_league, p_synth, nullptr, cfg.worth);
    phi_points.push_back(evaluate_phi(problem, worths));
  }

  const auto t_point = std::chrono::steady_clock::now();
  const auto boot = bootstrap_run(league, problems, cfg.model, cfg.worth,
                                  cfg.bootstrap, cfg.exec, &worth_model);
  const auto t_boot = std::chrono::steady_clock::now();

  for (std::size_t t = 0; t < problems.size(); ++t) {
    const WorthProblem& problem = problems[t];
    const std::string& team = teams[t];
    const TeamPhiMatrix& bm = boot.at(team);
    const auto rows = prs_table(problem, ds, phi_points[t], bm, cfg.bootstrap);

    std::vector<std::vector<std::string>> csv;
    for (const auto& r : rows)
      csv.push_back({r.player_id, role_token(r.role), format_int(r.actions),
                     format_double(r.phi_hat), format_double(r.boot_mean),
                     format_double(r.se),
                     r.prs ? format_double(*r.prs) : std::string(),
                     format_double(r.ci_low), format_double(r.ci_high),
                     flag_string(r)});
    const std::string prs_csv = "prs_" + sanitize(team) + ".csv";
    write_csv(join_path(cfg.out_dir, prs_csv),
              {"player", "role", "actions", "phi_hat", "phi_boot_mean", "se",
               "prs", "ci_low", "ci_high", "flag"},
              csv);
    emit(prs_csv);

    nlohmann::json pj;
    pj["team"] = team;
    pj["B"] = cfg.bootstrap.B;
    pj["base_seed"] = cfg.bootstrap.base_seed;
    pj["ci_level"] = cfg.bootstrap.ci_level;
    pj["refit_model"] = cfg.bootstrap.refit_model;
    pj["model_kind"] = model_kind_token(cfg.model.kind);
    pj["observed_worth"] = cfg.worth.observed_mean ? "mean" : "sum";
    pj["failed_replications"] = bm.failed_replications;
    nlohmann::json rows_json = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json rj;
      rj["player"] = r.player_id;
      rj["role"] = role_token(r.role);
      rj["actions"] = r.actions;
      rj["phi_hat"] = r.phi_hat;
      rj["phi_boot_mean"] = r.boot_mean;
      rj["se"] = r.se;
      if (r.prs) rj["prs"] = *r.prs;
      else rj["prs"] = nullptr;
      rj["ci_low"] = r.ci_low;
      rj["ci_high"] = r.ci_high;
      rj["degenerate"] = r.degenerate;
      rj["missing_replications"] = r.missing_replications;
      rows_json.push_back(std::move(rj));
    }
    pj["rows"] = std::move(rows_json);
    nlohmann::json missing = nlohmann::json::array();
    for (int i = 0; i < problem.roster.n(); ++i)
      if (!phi_points[t][i]) missing.push_back(problem.roster.player_ids[i]);
    pj["players_missing_support"] = std::move(missing);
    const std::string prs_json = "prs_" + sanitize(team) + ".json";
    write_file(join_path(cfg.out_dir, prs_json), pj.dump(2) + "\n");
    emit(prs_json);

    // Scatter input: PRS against finishing efficiency, joined on player.
    const EfficiencyResult eff = efficiency_metric(ds, xg_model, team);
    std::map<std::string, const EfficiencyRow*> eff_by_id;
    for (const auto& er : eff.rows) eff_by_id[er.player_id] = &er;
    std::vector<std::vector<std::string>> scsv;
    for (const auto& r : rows) {
      auto it = eff_by_id.find(r.player_id);
      if (it == eff_by_id.end()) continue;
      scsv.push_back({r.player_id,
                      r.prs ? format_double(*r.prs) : std::string(),
                      format_double(it->second->g90),
                      format_double(it->second->xg90),
                      format_double(it->second->diff)});
    }
    const std::string scatter_csv = "scatter_" + sanitize(team) + ".csv";
    write_csv(join_path(cfg.out_dir, scatter_csv),
              {"player", "prs", "g90", "xg90", "diff"}, scsv);
    emit(scatter_csv);

    team_stats[team]["failed_replications"] = bm.failed_replications;
    out << "team " << team << ": " << rows.size() << " players scored\n";
  }

  write_metrics_csv(join_path(cfg.out_dir, "metrics.csv"), ds, cfg);
  emit("metrics.csv");
  const auto t_end = std::chrono::steady_clock::now();

  nlohmann::json manifest;
  manifest["created_at"] = iso_now();
  manifest["config"] = cfg.to_json();
  manifest["filter_log"] = filter_log_json(ds);
  manifest["warnings"] = warnings;
  manifest["teams"] = std::move(team_stats);
  manifest["seeds"] = {{"base_seed", cfg.bootstrap.base_seed}};
  nlohmann::json hashes = nlohmann::json::object();
  for (const auto& name : written)
    hashes[name] = hex64(fnv1a64(read_file(join_path(cfg.out_dir, name))));
  manifest["artifacts"] = std::move(hashes);
  auto ms = [](auto a, auto b) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(b - a).count();
  };
  manifest["timings_ms"] = {{"models", ms(t_start, t_models)},
                            {"point", ms(t_models, t_point)},
                            {"bootstrap", ms(t_point, t_boot)},
                            {"metrics_and_reports", ms(t_boot, t_end)},
                            {"total", ms(t_start, t_end)}};
  write_file(join_path(cfg.out_dir, "manifest.json"), manifest.dump(2) + "\n");
  out << "manifest -> " << join_path(cfg.out_dir, "manifest.json") << "\n";
}

void cmd_scatter(const RunConfig& cfg, std::ostream& out) {
  const Dataset ds = load_filtered(cfg, nullptr);
  for (const auto& team : selected_teams(cfg, ds)) {
    const std::string spath =
        join_path(cfg.out_dir, "scatter_" + sanitize(team) + ".csv");
    const CsvTable t = read_csv(spath);
    const int c_player = t.column("player");
    const int c_prs = t.column("prs");
    const int c_g90 = t.column("g90");
    const int c_xg90 = t.column("xg90");
    const int c_diff = t.column("diff");
    if (c_player < 0 || c_prs < 0 || c_g90 < 0 || c_xg90 < 0 || c_diff < 0)
      throw PrsError("MissingColumn", spath + ": not a scatter artifact");

    std::vector<double> prs_vals;
    for (const auto& row : t.rows)
      if (!row[c_prs].empty())
        prs_vals.push_back(parse_double(row[c_prs], spath));
    if (prs_vals.empty())
      throw PrsError("EmptyResult", spath + ": no scored players");
    const std::vector<double> sorted = sorted_copy(prs_vals);
    const double med = quantile_sorted(sorted, 0.5);

    std::map<std::string, int> counts = {{"top_right", 0},
                                         {"top_left", 0},
                                         {"bottom_right", 0},
                                         {"bottom_left", 0},
                                         {"unscored", 0}};
    std::vector<std::vector<std::string>> rows;
    for (const auto& row : t.rows) {
      std::string quadrant = "unscored";
      if (!row[c_prs].empty()) {
        const double prs = parse_double(row[c_prs], spath);
        const double diff = parse_double(row[c_diff], spath);
        const bool right = prs >= med;
        const bool top = diff > 0.0;
        quadrant = std::string(top ? "top" : "bottom") + "_" +
                   (right ? "right" : "left");
      }
      ++counts[quadrant];
      rows.push_back({row[c_player], row[c_prs], row[c_g90], row[c_xg90],
                      row[c_diff], quadrant});
    }
    const std::string qpath = join_path(
        cfg.out_dir, "scatter_quadrants_" + sanitize(team) + ".csv");
    write_csv(qpath, {"player", "prs", "g90", "xg90", "diff", "quadrant"},
              rows);
    out << "team " << team << ": prs median " << format_double(med)
        << ", quadrants";
    for (const auto& [name, count] : counts)
      if (name != "unscored" || count > 0)
        out << " " << name << "=" << count;
    out << " -> " << qpath << "\n";
  }
}

int run_guarded(const std::function<void()>& body, std::ostream& err) {
  try {
    body();
    return 0;
  } catch (const PrsError& e) {
    nlohmann::json j = {
        {"errors",
         nlohmann::json::array({{{"code", e.code()}, {"message", e.what()}}})}};
    err << j.dump() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    nlohmann::json j = {
        {"errors", nlohmann::json::array(
                       {{{"code", "Internal"}, {"message", e.what()}}})}};
    err << j.dump() << "\n";
    return 4;
  }
}

}  // namespace prs
