#include "doctest.h"

#include "perivar/experiments.hpp"
#include "perivar/io.hpp"

using namespace perivar;

namespace {

/// Every row backed by a frame re-evaluates to its recorded value.
void check_rows(const ScenarioReport& r) {
  for (std::size_t i = 0; i < r.checks.size(); ++i) {
    const auto& [frame, pair] = r.checks[i];
    const auto& f = r.frames.at(frame);
    const Rational v = assemble(pair, FullSpace{Region::all(f.set.domain())}).evaluate(f.set);
    const auto& cols = r.columns;
    if (std::find(cols.begin(), cols.end(), "value") != cols.end() && r.id != "convex_threshold") {
      CHECK(to_string(v) == r.cell(i, "value"));
    }
  }
}

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("runaway slab") {
    const auto r = run_runaway_slab(3, {0, 2, 4, 6});
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      CHECK(r.cell(i, "value") == "-4");
      CHECK(r.cell(i, "limit_value") == "0");
    }
    CHECK(r.verdict("constant sequence"));
    CHECK(r.verdict("LSC fails under local-only convergence"));
    check_rows(r);
    const auto one = run_runaway_slab(1, {0, 1});
    CHECK(one.cell(0, "value") == "0");
    CHECK_FALSE(one.verdict("LSC fails under local-only convergence"));
    const auto zero = run_runaway_slab(3, {0, 1}, 0);
    CHECK(zero.cell(0, "value") == "8");
    CHECK_FALSE(zero.verdict("LSC fails under local-only convergence"));
  }

  TEST_CASE("tentacle") {
    const auto two = run_tentacle(2, {1, 2, 3, 4, 5, 6});
    CHECK(two.verdict("cancellation holds"));
    CHECK_FALSE(two.verdict("violation exhibited"));
    check_rows(two);
    const auto more = run_tentacle(make_rational(5, 2), {1, 2, 3, 4, 5, 6});
    CHECK(more.verdict("violation exhibited"));
    CHECK_FALSE(more.verdict("cancellation holds"));
    // gap = (2 - w) k
    CHECK(more.cell(5, "gap") == "-3");
    const auto none = run_tentacle(0, {1, 3});
    CHECK(none.verdict("cancellation holds"));
    CHECK(none.cell(1, "gap") == "6");
    const auto wide = run_tentacle(2, {2, 4}, {1, 2});
    CHECK(wide.rows.size() == 4);
    CHECK_THROWS_AS(run_tentacle(-1, {1}), std::invalid_argument);
  }

  TEST_CASE("convex threshold") {
    const auto r = run_convex_threshold({make_rational(1, 2), 1, 2});
    CHECK(r.verdict("threshold at theta = 1"));
    CHECK(r.cell(0, "minimizer") == "empty");
    CHECK(r.cell(1, "minimizer") == "empty");
    CHECK(r.cell(1, "K_optimal") == "true");
    CHECK(r.cell(2, "minimizer") == "K");
    CHECK(r.cell(2, "value") == "-8");
  }

  TEST_CASE("capacity scaling") {
    const auto r = run_capacity_scaling({1, 2, 3, 4, 5, 6});
    CHECK(r.verdict("capacity equals 2k+2"));
    CHECK(r.verdict("ratio to 2k nonincreasing"));
    CHECK(r.cell(5, "capacity") == "14");
    CHECK(r.cell(0, "ratio_to_2k") == "2");
  }

  TEST_CASE("pseudoconvex rectangles") {
    const auto r = run_pseudoconvex({{1, 1}, {2, 3}});
    CHECK(r.verdict("strong IC holds with constant 1"));
    CHECK(r.verdict("constant 1 is attained"));
    CHECK(r.cell(1, "excess") == "0");
  }

  TEST_CASE("interval clusters") {
    const auto r = run_interval_clusters({1, 4});
    CHECK(r.verdict("excess positive within a cluster"));
    for (std::size_t i = 0; i < r.rows.size(); ++i) CHECK(r.cell(i, "method") == "exhaustive-exact");
  }

  TEST_CASE("refinement") {
    const auto c = run_refinement("convex_threshold", {1, 2});
    CHECK(c.verdict("normalized value constant"));
    CHECK(c.cell(1, "value") == "-16");
    const auto cap = run_refinement("capacity_scaling", {1, 2});
    CHECK(cap.verdict("ratio to 2k nonincreasing"));
    const auto p = run_refinement("pseudoconvex", {1, 2});
    CHECK(p.verdict("excess zero at every resolution"));
    CHECK_THROWS_AS(run_refinement("tentacle", {1}), std::invalid_argument);
  }

  TEST_CASE("replayable reports") {
    for (const auto& name : scenario_names()) {
      const auto a = run_scenario(name);
      const auto b = run_scenario(name);
      CHECK(scenario_json(a, {}).dump() == scenario_json(b, {}).dump());
    }
    CHECK_THROWS_AS(run_scenario("nope"), std::invalid_argument);
  }

  TEST_CASE("unknown verdicts and columns") {
    const auto r = run_runaway_slab(2, {0});
    CHECK_THROWS_AS(r.verdict("nope"), std::out_of_range);
    CHECK_THROWS_AS(r.cell(0, "nope"), std::out_of_range);
  }
}
