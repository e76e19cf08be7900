#include "delaykit/table.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace delaykit::cli {

namespace {

std::string csv_quote(const std::string& field) {
  const bool needs_quote = field.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs_quote) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void ResultTable::validate() const {
  for (const auto& row : rows) {
    if (row.size() != columns.size()) throw std::invalid_argument("ResultTable: ragged row");
    for (double v : row) {
      if (!std::isfinite(v)) throw std::invalid_argument("ResultTable: non-finite value");
    }
  }
}

std::string to_csv(const ResultTable& table) {
  table.validate();
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += csv_quote(table.columns[c]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_value(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const ResultTable& table) {
  table.validate();
  nlohmann::json j;
  j["meta"] = nlohmann::json::object();
  for (const auto& [k, v] : table.meta) j["meta"][k] = v;
  j["columns"] = table.columns;
  j["rows"] = table.rows;
  return j.dump(2) + "\n";
}

ResultTable from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ResultTable t;
  if (j.contains("meta")) {
    for (const auto& [k, v] : j.at("meta").items()) t.meta[k] = v.get<std::string>();
  }
  t.columns = j.at("columns").get<std::vector<std::string>>();
  t.rows = j.at("rows").get<std::vector<std::vector<double>>>();
  t.validate();
  return t;
}

void emit(const ResultTable& table, const std::string& format, std::ostream& out) {
  if (format == "csv") {
    out << to_csv(table);
  } else if (format == "json") {
    out << to_json(table);
  } else {
    throw std::invalid_argument("emit: format must be csv or json");
  }
  if (!out) throw std::runtime_error("emit: write failed");
}

}  // namespace delaykit::cli
