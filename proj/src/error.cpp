#include "prs/error.hpp"

#include <set>

namespace prs {

int exit_code_for(const std::string& error_code) {
  static const std::set<std::string> input = {
      "MissingFile",
      "MissingColumn",
      "ConfigParse",
  };
  static const std::set<std::string> validation = {
      "BadEnum",        "BadRole",          "BadValue",
      "UnknownPlayer",  "TeamMismatch",     "DuplicateActionId",
      "DuplicatePlayerId", "UnknownCount",  "EmptyResult",
      "BadConfig",      "ShooterNotParticipant",
  };
  if (input.count(error_code)) return 2;
  if (validation.count(error_code)) return 3;
  return 4;
}

}  // namespace prs
