#pragma once

#include "delaykit/config.hpp"
#include "delaykit/table.hpp"

namespace delaykit::cli {

struct RunResult {
  ResultTable table;
  bool verify_failed = false;
};

/// Dispatches a validated config to the solvers and assembles the result
/// table. Deterministic: identical configs produce identical tables. Grid
/// evaluations run in parallel up to the DELAYKIT_THREADS cap.
RunResult run(const ProblemConfig& cfg);

/// The verify suite on its own (fixed seed); used by `run` for kind=verify.
RunResult run_verify();

}  // namespace delaykit::cli
