#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "delaykit/config.hpp"
#include "delaykit/runner.hpp"
#include "delaykit/table.hpp"

using namespace delaykit::cli;

TEST_CASE("fundsol run reports the no-semigroup gap for the diagonal pair") {
  const auto cfg = parse_config_text(
      R"json({"kind":"fundsol","A0":[[1,0],[0,1]],"A1":[[-1,0],[0,-1]],"tau":1,
          "grid":{"t_start":0,"t_end":2,"n_points":11}})json");
  const auto result = run(cfg);
  const auto& t = result.table;
  REQUIRE(t.columns.back() == "semigroup_gap");
  // at t = 1.2 the gap is about 0.244
  bool found = false;
  for (const auto& row : t.rows) {
    if (std::abs(row[0] - 1.2) < 1e-12) {
      found = true;
      CHECK(row.back() > 0.01);
      const double want = std::exp(0.2) * (std::exp(1.0) + 1.0 - 1.2);
      CHECK(std::abs(row[1] - want) <= 1e-10);  // S_0_0 column
    }
  }
  CHECK(found);
}

TEST_CASE("ivp run reproduces the scalar hand value") {
  const auto cfg = parse_config_text(
      R"json({"kind":"ivp","A0":[[0]],"A1":[[1]],"tau":1,"phi":"1",
          "grid":{"t_start":0,"t_end":2,"n_points":5}})json");
  const auto result = run(cfg);
  const auto& rows = result.table.rows;
  REQUIRE(rows.size() == 5);
  CHECK(std::abs(rows.back()[0] - 2.0) <= 1e-14);
  CHECK(std::abs(rows.back()[1] - 3.5) <= 1e-6);

  // the oracle route agrees
  auto cfg2 = cfg;
  cfg2.method = "steps";
  const auto result2 = run(cfg2);
  CHECK(std::abs(result2.table.rows.back()[1] - 3.5) <= 1e-6);
}

TEST_CASE("heat run emits long-format rows with zero boundaries") {
  const auto cfg = parse_config_text(
      R"json({"kind":"heat","a":1,"b":0,"tau":1,"phi":"sin(x)","n_modes":4,
          "grid":{"t_start":0,"t_end":1,"n_points":3,"x_points":5}})json");
  const auto result = run(cfg);
  const auto& t = result.table;
  REQUIRE(t.columns == std::vector<std::string>{"t", "x", "u"});
  REQUIRE(t.rows.size() == 3 * 5);
  for (const auto& row : t.rows) {
    if (row[1] == 0.0 || std::abs(row[1] - M_PI) < 1e-14) CHECK(row[2] == 0.0);
  }
  // interior follows e^{-t} sin x
  for (const auto& row : t.rows) {
    CHECK(std::abs(row[2] - std::exp(-row[0]) * std::sin(row[1])) <= 1e-6);
  }
}

TEST_CASE("verify run passes and is deterministic") {
  const auto a = run_verify();
  CHECK_FALSE(a.verify_failed);
  for (const auto& row : a.table.rows) CHECK(row[1] == 1.0);
  const auto b = run_verify();
  CHECK(to_csv(a.table) == to_csv(b.table));
}

TEST_CASE("identical configs give byte-identical csv") {
  const auto cfg = parse_config_text(
      R"json({"kind":"ivp","A0":[[0,1],[-0.5,-0.1]],"A1":[[0.2,0],[0,0.2]],"tau":1,
          "phi":["1","0"],"g":"sin(t)","grid":{"t_start":0,"t_end":3,"n_points":13}})json");
  const auto a = run(cfg);
  const auto b = run(cfg);
  CHECK(to_csv(a.table) == to_csv(b.table));
}
