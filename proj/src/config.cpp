#include "delaykit/config.hpp"

#include <json.hpp>

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace delaykit::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument("config: " + path + ": " + what);
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Matrix as_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
  const std::size_t n = j.size();
  std::vector<double> flat;
  flat.reserve(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || row.size() != n) {
      std::ostringstream msg;
      msg << "row " << r << " must have " << n << " entries (square matrix)";
      fail(path, msg.str());
    }
    for (std::size_t c = 0; c < n; ++c) flat.push_back(as_number(row[c], path));
  }
  try {
    return Matrix::from_flat(static_cast<int>(n), flat);
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

Expression compile(const std::string& text, std::span<const std::string> vars,
                   const std::string& path) {
  try {
    return Expression::parse(text, vars);
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

std::vector<Expression> as_expr_list(const json& j, std::span<const std::string> vars,
                                     const std::string& path) {
  std::vector<Expression> out;
  if (j.is_string()) {
    out.push_back(compile(j.get<std::string>(), vars, path));
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      std::ostringstream p;
      p << path << "[" << i << "]";
      out.push_back(compile(as_string(j[i], p.str()), vars, p.str()));
    }
  } else {
    fail(path, "expected an expression string or array of strings");
  }
  return out;
}

GridSpec as_grid(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object {t_start, t_end, n_points[, x_points]}");
  GridSpec g;
  bool have_end = false, have_n = false;
  for (const auto& [key, value] : j.items()) {
    const std::string p = path + "." + key;
    if (key == "t_start") {
      g.t_start = as_number(value, p);
    } else if (key == "t_end") {
      g.t_end = as_number(value, p);
      have_end = true;
    } else if (key == "n_points") {
      g.n_points = as_int(value, p);
      have_n = true;
    } else if (key == "x_points") {
      g.x_points = as_int(value, p);
    } else {
      fail(p, "unknown key");
    }
  }
  if (!have_end || !have_n) fail(path, "t_end and n_points are required");
  if (g.n_points < 1) fail(path + ".n_points", "must be >= 1");
  if (g.x_points < 3) fail(path + ".x_points", "must be >= 3");
  if (!(g.t_end >= g.t_start)) fail(path, "t_end must be >= t_start");
  return g;
}

const std::vector<std::string> kTimeVar = {"t"};
const std::vector<std::string> kSpaceTimeVars = {"x", "t"};

}  // namespace

ProblemConfig parse_config_text(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  if (!j.contains("kind")) throw std::invalid_argument("config: $.kind is required");

  ProblemConfig cfg;
  cfg.kind = as_string(j["kind"], "$.kind");
  const std::set<std::string> kinds = {"fundsol", "ivp", "heat", "verify"};
  if (!kinds.count(cfg.kind)) {
    fail("$.kind", "must be one of fundsol, ivp, heat, verify");
  }
  if (cfg.kind == "heat") cfg.method = "spectral";

  bool grid_given = false;
  for (const auto& [key, value] : j.items()) {
    const std::string p = "$." + key;
    if (key == "kind") {
      continue;
    } else if (key == "A0") {
      cfg.a0 = as_matrix(value, p);
    } else if (key == "A1") {
      cfg.a1 = as_matrix(value, p);
    } else if (key == "tau") {
      cfg.tau = as_number(value, p);
    } else if (key == "a") {
      cfg.heat_a = as_number(value, p);
    } else if (key == "b") {
      cfg.heat_b = as_number(value, p);
    } else if (key == "phi") {
      if (cfg.kind == "heat") {
        cfg.heat_phi = compile(as_string(value, p), kSpaceTimeVars, p);
      } else {
        cfg.phi = as_expr_list(value, kTimeVar, p);
      }
    } else if (key == "g") {
      cfg.g = as_expr_list(value, kTimeVar, p);
    } else if (key == "psi") {
      cfg.heat_psi = compile(as_string(value, p), kSpaceTimeVars, p);
    } else if (key == "grid") {
      cfg.grid = as_grid(value, p);
      grid_given = true;
    } else if (key == "method") {
      cfg.method = as_string(value, p);
    } else if (key == "tol") {
      cfg.tol = as_number(value, p);
      if (!(cfg.tol > 0.0)) fail(p, "must be > 0");
    } else if (key == "quad_points") {
      cfg.quad_points = as_int(value, p);
      if (cfg.quad_points < 2) fail(p, "must be >= 2");
    } else if (key == "n_modes") {
      cfg.n_modes = as_int(value, p);
      if (cfg.n_modes < 1) fail(p, "must be >= 1");
    } else if (key == "step") {
      cfg.step = as_number(value, p);
      if (!(cfg.step > 0.0)) fail(p, "must be > 0");
    } else {
      fail(p, "unknown key");
    }
  }

  if (!(cfg.tau > 0.0)) fail("$.tau", "must be > 0");

  if (cfg.kind == "fundsol" || cfg.kind == "ivp") {
    if (!cfg.a0) fail("$.A0", "required for kind " + cfg.kind);
    if (!cfg.a1) fail("$.A1", "required for kind " + cfg.kind);
    if (cfg.a0->dim() != cfg.a1->dim()) {
      std::ostringstream msg;
      msg << "config: $.A0 is " << cfg.a0->dim() << "x" << cfg.a0->dim() << " but $.A1 is "
          << cfg.a1->dim() << "x" << cfg.a1->dim();
      throw std::invalid_argument(msg.str());
    }
    if (!grid_given) fail("$.grid", "required for kind " + cfg.kind);
    const std::set<std::string> methods = {"auto",           "pure", "permutable",
                                           "nonpermutable",  "dyson", "steps"};
    if (cfg.kind == "fundsol" && cfg.method == "steps") {
      fail("$.method", "steps applies to kind ivp only");
    }
    if (!methods.count(cfg.method)) {
      fail("$.method", "must be one of auto, pure, permutable, nonpermutable, dyson, steps");
    }
  }
  if (cfg.kind == "ivp") {
    if (cfg.phi.empty()) fail("$.phi", "required for kind ivp");
    const auto dim = static_cast<std::size_t>(cfg.a0->dim());
    if (cfg.phi.size() != 1 && cfg.phi.size() != dim) {
      fail("$.phi", "needs one expression per component (or a single one for all)");
    }
    if (!cfg.g.empty() && cfg.g.size() != 1 && cfg.g.size() != dim) {
      fail("$.g", "needs one expression per component (or a single one for all)");
    }
    if (!(cfg.grid.t_start >= 0.0)) fail("$.grid.t_start", "must be >= 0 for kind ivp");
  }
  if (cfg.kind == "heat") {
    if (!cfg.heat_phi) fail("$.phi", "required for kind heat");
    if (!grid_given) fail("$.grid", "required for kind heat");
    if (!(cfg.grid.t_start >= 0.0)) fail("$.grid.t_start", "must be >= 0 for kind heat");
    if (cfg.method != "spectral" && cfg.method != "fd") {
      fail("$.method", "must be spectral or fd for kind heat");
    }
  }
  return cfg;
}

ProblemConfig parse_config_file(const std::string& path) {
  std::string text;
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    text = buf.str();
  } else {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  return parse_config_text(text);
}

}  // namespace delaykit::cli
