#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace prs {

// Single exception type for every failure the library can report.  The code
// string is machine-readable and stable; the CLI maps it onto an exit code.
class PrsError : public std::runtime_error {
 public:
  PrsError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Exit code classes used by the CLI.  Input problems (missing files or
// columns, unparsable config) map to 2, semantic validation failures to 3,
// anything else to 4.
int exit_code_for(const std::string& error_code);

}  // namespace prs
