#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "delaykit/config.hpp"
#include "delaykit/errors.hpp"
#include "delaykit/runner.hpp"
#include "delaykit/table.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitVerifyFailed = 3;

struct Options {
  std::string config_path;
  std::string format = "csv";
  std::string out_path;
  double tol = -1.0;
  int modes = -1;
  double step = -1.0;
};

void add_common(CLI::App* sub, Options& opt, bool config_required) {
  auto* config = sub->add_option("--config", opt.config_path,
                                 "problem configuration, JSON ('-' reads stdin)");
  if (config_required) config->required();
  sub->add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", opt.out_path, "output path (default stdout)");
  sub->add_option("--tol", opt.tol, "override tolerance");
  sub->add_option("--modes", opt.modes, "override spectral mode count");
  sub->add_option("--step", opt.step, "override step size");
}

int emit_result(const delaykit::cli::RunResult& result, const Options& opt) {
  if (opt.out_path.empty()) {
    delaykit::cli::emit(result.table, opt.format, std::cout);
  } else {
    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << opt.out_path << "\n";
      return kExitConfig;
    }
    delaykit::cli::emit(result.table, opt.format, out);
  }
  if (result.verify_failed) {
    std::cerr << "verification failed\n";
    return kExitVerifyFailed;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"delaykit: closed-form solvers for linear evolution equations with one delay"};
  app.require_subcommand(1);

  Options opt;
  auto* cmd_fundsol = app.add_subcommand("fundsol", "evaluate the fundamental solution S(t; tau)");
  auto* cmd_ivp = app.add_subcommand("ivp", "solve a delay initial value problem");
  auto* cmd_heat = app.add_subcommand("heat", "solve the delayed heat problem on [0, pi]");
  auto* cmd_verify = app.add_subcommand("verify", "run the invariant suite");
  add_common(cmd_fundsol, opt, true);
  add_common(cmd_ivp, opt, true);
  add_common(cmd_heat, opt, true);
  add_common(cmd_verify, opt, false);

  CLI11_PARSE(app, argc, argv);

  const std::string sub = app.get_subcommands().front()->get_name();

  delaykit::cli::ProblemConfig cfg;
  try {
    if (sub == "verify" && opt.config_path.empty()) {
      cfg.kind = "verify";
    } else {
      cfg = delaykit::cli::parse_config_file(opt.config_path);
    }
    if (cfg.kind != sub) {
      std::cerr << "error: config kind '" << cfg.kind << "' does not match subcommand '" << sub
                << "'\n";
      return kExitConfig;
    }
    if (opt.tol > 0.0) cfg.tol = opt.tol;
    if (opt.modes > 0) cfg.n_modes = opt.modes;
    if (opt.step > 0.0) cfg.step = opt.step;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const auto result = delaykit::cli::run(cfg);
    return emit_result(result, opt);
  } catch (const delaykit::TruncationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const delaykit::NumericRangeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const delaykit::DivergedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
