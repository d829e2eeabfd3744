#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace prs {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index by name; -1 if absent.
  int column(const std::string& name) const;
};

// Reads a comma-separated file.  Quoted fields may contain commas and doubled
// quotes; embedded newlines are not supported.  A UTF-8 BOM and trailing CR
// are stripped; blank lines are skipped.  Throws MissingFile / BadValue.
CsvTable read_csv(const std::string& path);

// Writes rows with minimal quoting (fields containing comma, quote or
// whitespace padding get quoted, quotes doubled).
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

// Shortest decimal string that round-trips the exact double.
std::string format_double(double v);
std::string format_int(long long v);

// Strict numeric parsing; `context` names the row/field for error messages.
double parse_double(const std::string& s, const std::string& context);
long long parse_int(const std::string& s, const std::string& context);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace prs
