#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "prs/pipeline.hpp"

namespace {

struct GlobalArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::vector<std::string> teams;
  bool quiet = false;
};

prs::RunConfig resolve_config(const GlobalArgs& args) {
  prs::RunConfig cfg;
  if (!args.config_path.empty()) cfg = prs::RunConfig::load(args.config_path);
  if (args.seed) {
    cfg.bootstrap.base_seed = *args.seed;
    cfg.synth.seed = *args.seed;
  }
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  if (!args.teams.empty()) cfg.teams = args.teams;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contextual goal-probability models, coalition worth "
               "attribution and bootstrap-normalized player ratings"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  GlobalArgs args;
  app.add_option("--config", args.config_path, "JSON configuration file")
      ->envname("PRS_CONFIG");
  app.add_option("--seed", args.seed,
                 "overrides the bootstrap base seed and the generator seed");
  app.add_option("--out", args.out_dir, "overrides paths.out_dir");
  app.add_option("--team", args.teams,
                 "team id to process (repeatable; default all)");
  app.add_flag("--quiet", args.quiet, "suppress progress output");

  using Cmd = void (*)(const prs::RunConfig&, std::ostream&);
  struct Sub {
    const char* name;
    const char* help;
    Cmd fn;
  };
  const Sub subs[] = {
      {"validate", "load, validate and filter the dataset", prs::cmd_validate},
      {"synth", "generate a synthetic league", prs::cmd_synth},
      {"train", "fit the configured model and save the artifact",
       prs::cmd_train},
      {"evaluate", "out-of-bag metrics, VIF and feature importance",
       prs::cmd_evaluate},
      {"coalitions", "observed coalition distribution per team",
       prs::cmd_coalitions},
      {"prs", "full attribution pipeline with bootstrap inference",
       prs::cmd_run_prs},
      {"scatter", "label PRS/efficiency quadrants from a finished run",
       prs::cmd_scatter},
  };

  Cmd selected = nullptr;
  for (const Sub& sub : subs) {
    CLI::App* s = app.add_subcommand(sub.name, sub.help);
    const Cmd fn = sub.fn;
    s->callback([&selected, fn] { selected = fn; });
  }

  CLI11_PARSE(app, argc, argv);

  std::ostringstream devnull;
  std::ostream& out = args.quiet ? static_cast<std::ostream&>(devnull)
                                 : std::cout;
  return prs::run_guarded(
      [&] {
        const prs::RunConfig cfg = resolve_config(args);
        selected(cfg, out);
      },
      std::cerr);
}
