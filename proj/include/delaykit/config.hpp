#pragma once

#include <optional>
#include <string>
#include <vector>

#include "delaykit/expression.hpp"
#include "delaykit/matrix.hpp"

namespace delaykit::cli {

struct GridSpec {
  double t_start = 0.0;
  double t_end = 1.0;
  int n_points = 11;
  int x_points = 41;
};

/// Parsed and validated problem configuration. Expressions are compiled at
/// parse time so bad identifiers are rejected with their key path.
struct ProblemConfig {
  std::string kind;  // fundsol | ivp | heat | verify

  std::optional<Matrix> a0, a1;
  double tau = 1.0;
  double heat_a = 1.0;
  double heat_b = 0.0;

  std::vector<Expression> phi;  // ivp history, one per component, vars (t)
  std::vector<Expression> g;    // ivp forcing, vars (t)
  std::optional<Expression> heat_phi;  // vars (x, t)
  std::optional<Expression> heat_psi;  // vars (x, t)

  GridSpec grid;
  std::string method = "auto";  // heat default: spectral

  double tol = 1e-8;
  int quad_points = 16;
  int n_modes = 64;
  double step = 0.0;  // 0 = derive from tau at run time
};

/// Parses a JSON config document. Unknown keys, dimension mismatches and
/// malformed expressions are rejected with a diagnostic naming the key path.
ProblemConfig parse_config_text(const std::string& json_text);

/// Reads the file (or stdin when path is "-") and parses it.
ProblemConfig parse_config_file(const std::string& path);

}  // namespace delaykit::cli
