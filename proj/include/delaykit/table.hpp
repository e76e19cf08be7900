#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace delaykit::cli {

/// Rectangular numeric result table. Metadata travels only in the JSON
/// encoding; CSV output is a pure header + rows document so identical runs
/// stay byte-identical.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::map<std::string, std::string> meta;

  void validate() const;  // rectangular, finite
};

/// RFC 4180 CSV; values printed with 17 significant digits.
std::string to_csv(const ResultTable& table);

/// {"meta": {...}, "columns": [...], "rows": [[...]]}.
std::string to_json(const ResultTable& table);

/// Inverse of to_json; values round-trip bit-exactly.
ResultTable from_json(const std::string& text);

/// format is "csv" or "json".
void emit(const ResultTable& table, const std::string& format, std::ostream& out);

}  // namespace delaykit::cli
