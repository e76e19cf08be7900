#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "delaykit/config.hpp"

using namespace delaykit::cli;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal fundsol config is valid with defaults applied") {
  const auto cfg = parse_config_text(
      R"json({"kind":"fundsol","A0":[[0]],"A1":[[1]],"tau":1,
          "grid":{"t_start":0,"t_end":3,"n_points":31}})json");
  CHECK(cfg.kind == "fundsol");
  CHECK(cfg.a0->dim() == 1);
  CHECK(cfg.tau == 1.0);
  CHECK(cfg.tol == 1e-8);
  CHECK(cfg.quad_points == 16);
  CHECK(cfg.n_modes == 64);
  CHECK(cfg.step == 0.0);
  CHECK(cfg.method == "auto");
  CHECK(cfg.grid.n_points == 31);
}

TEST_CASE("dimension mismatch names both keys") {
  const std::string err = error_of(
      R"json({"kind":"fundsol","A0":[[0,1],[0,0]],"A1":[[1,0,0],[0,1,0],[0,0,1]],
          "tau":1,"grid":{"t_end":1,"n_points":2}})json");
  CHECK(err.find("$.A0") != std::string::npos);
  CHECK(err.find("$.A1") != std::string::npos);
  CHECK(err.find("2x2") != std::string::npos);
  CHECK(err.find("3x3") != std::string::npos);
}

TEST_CASE("unknown keys are rejected with their path") {
  const std::string err = error_of(
      R"json({"kind":"fundsol","A0":[[0]],"A1":[[0]],"tau":1,
          "grid":{"t_end":1,"n_points":2},"frobnicate":3})json");
  CHECK(err.find("$.frobnicate") != std::string::npos);
  CHECK(err.find("unknown key") != std::string::npos);

  const std::string nested = error_of(
      R"json({"kind":"fundsol","A0":[[0]],"A1":[[0]],"tau":1,
          "grid":{"t_end":1,"n_points":2,"zz":1}})json");
  CHECK(nested.find("$.grid.zz") != std::string::npos);
}

TEST_CASE("heat expressions are validated against the grammar") {
  const auto good = parse_config_text(
      R"json({"kind":"heat","a":1,"b":0.5,"tau":1,"phi":"sin(x)*exp(t)",
          "grid":{"t_end":2,"n_points":5,"x_points":11}})json");
  CHECK(good.heat_phi.has_value());
  CHECK(good.method == "spectral");

  const std::string err = error_of(
      R"json({"kind":"heat","a":1,"b":0.5,"tau":1,"phi":"foo(t)",
          "grid":{"t_end":2,"n_points":5}})json");
  CHECK(err.find("$.phi") != std::string::npos);
  CHECK(err.find("foo") != std::string::npos);
}

TEST_CASE("ivp configs take per-component or broadcast expressions") {
  const auto cfg = parse_config_text(
      R"json({"kind":"ivp","A0":[[0,1],[-1,0]],"A1":[[0.1,0],[0,0.1]],"tau":1,
          "phi":["1+t","cos(t)"],"g":"sin(t)",
          "grid":{"t_end":3,"n_points":7}})json");
  CHECK(cfg.phi.size() == 2);
  CHECK(cfg.g.size() == 1);

  const std::string err = error_of(
      R"json({"kind":"ivp","A0":[[0,1],[-1,0]],"A1":[[0,0],[0,0]],"tau":1,
          "phi":["1","2","3"],"grid":{"t_end":1,"n_points":2}})json");
  CHECK(err.find("$.phi") != std::string::npos);
}

TEST_CASE("required keys per kind") {
  CHECK(error_of(R"json({"kind":"fundsol","A1":[[1]],"tau":1,"grid":{"t_end":1,"n_points":2}})json")
            .find("$.A0") != std::string::npos);
  CHECK(error_of(R"json({"kind":"ivp","A0":[[0]],"A1":[[1]],"tau":1,"grid":{"t_end":1,"n_points":2}})json")
            .find("$.phi") != std::string::npos);
  CHECK(error_of(R"json({"kind":"heat","grid":{"t_end":1,"n_points":2}})json").find("$.phi") !=
        std::string::npos);
  CHECK(error_of(R"json({"kind":"fundsol","A0":[[0]],"A1":[[1]],"tau":1})json").find("$.grid") !=
        std::string::npos);
}

TEST_CASE("scalar field validation") {
  CHECK(error_of(R"json({"kind":"verify","tol":-1})json").find("$.tol") != std::string::npos);
  CHECK(error_of(R"json({"kind":"verify","quad_points":1})json").find("$.quad_points") !=
        std::string::npos);
  CHECK(error_of(R"json({"kind":"verify","step":0})json").find("$.step") != std::string::npos);
  CHECK(error_of(R"json({"kind":"nonsense"})json").find("$.kind") != std::string::npos);
  CHECK(error_of("not json at all").find("malformed JSON") != std::string::npos);
  CHECK(error_of(R"json({"kind":"fundsol","A0":[[0]],"A1":[[1]],"tau":0,
                     "grid":{"t_end":1,"n_points":2}})json")
            .find("$.tau") != std::string::npos);
}

TEST_CASE("matrices must be square arrays of numbers") {
  CHECK(error_of(R"json({"kind":"fundsol","A0":[[1,2]],"A1":[[1]],"tau":1,
                     "grid":{"t_end":1,"n_points":2}})json")
            .find("$.A0") != std::string::npos);
  CHECK(error_of(R"json({"kind":"fundsol","A0":[["x"]],"A1":[[1]],"tau":1,
                     "grid":{"t_end":1,"n_points":2}})json")
            .find("expected a number") != std::string::npos);
}

TEST_CASE("method values are checked per kind") {
  CHECK(error_of(R"json({"kind":"heat","phi":"sin(x)","method":"dyson","tau":1,
                     "grid":{"t_end":1,"n_points":2}})json")
            .find("$.method") != std::string::npos);
  CHECK(error_of(R"json({"kind":"fundsol","A0":[[0]],"A1":[[1]],"tau":1,"method":"steps",
                     "grid":{"t_end":1,"n_points":2}})json")
            .find("$.method") != std::string::npos);
}
