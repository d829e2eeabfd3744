#pragma once

#include <functional>
#include <iosfwd>
#include <string>

#include "prs/config.hpp"

namespace prs {

// Command bodies shared by the CLI and the tests.  Each throws PrsError on
// failure; run_guarded turns that into the documented exit code and a JSON
// error report on err.
void cmd_validate(const RunConfig& cfg, std::ostream& out);
void cmd_synth(const RunConfig& cfg, std::ostream& out);
void cmd_train(const RunConfig& cfg, std::ostream& out);
void cmd_evaluate(const RunConfig& cfg, std::ostream& out);
void cmd_coalitions(const RunConfig& cfg, std::ostream& out);
void cmd_run_prs(const RunConfig& cfg, std::ostream& out);
void cmd_scatter(const RunConfig& cfg, std::ostream& out);

int run_guarded(const std::function<void()>& body, std::ostream& err);

}  // namespace prs
