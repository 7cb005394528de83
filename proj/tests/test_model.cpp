#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "ktc/model.hpp"

using Catch::Approx;

TEST_CASE("tour cost matches hand computation") {
  ktc::Instance inst;
  inst.capacity = 3;
  inst.points = {{3.0, 4.0}, {0.0, 2.0}};

  CHECK(ktc::tour_cost(inst, {{0}}) == Approx(10.0).margin(1e-12));
  CHECK(ktc::tour_cost(inst, {{1}}) == Approx(4.0).margin(1e-12));
  // depot -> (3,4) -> (0,2) -> depot
  CHECK(ktc::tour_cost(inst, {{0, 1}}) == Approx(5.0 + std::sqrt(13.0) + 2.0).margin(1e-12));
  // orientation does not change a closed tour's length
  CHECK(ktc::tour_cost(inst, {{1, 0}}) == Approx(ktc::tour_cost(inst, {{0, 1}})).margin(1e-12));
}

TEST_CASE("tour cost rejects bad indices") {
  ktc::Instance inst;
  inst.points = {{1.0, 0.0}};
  CHECK_THROWS_AS(ktc::tour_cost(inst, {{1}}), ktc::Error);
  CHECK_THROWS_AS(ktc::tour_cost(inst, {{-1}}), ktc::Error);
}

TEST_CASE("radial cost is (2/k) times the radius sum") {
  ktc::Instance inst;
  inst.capacity = 4;
  inst.points = {{1.0, 0.0}, {0.0, 2.0}, {-3.0, 0.0}};
  CHECK(ktc::radial_cost(inst) == Approx(2.0 / 4.0 * 6.0).margin(1e-12));
  inst.capacity = 1;
  // k = 1: every point needs its own out-and-back tour, and that is optimal
  CHECK(ktc::radial_cost(inst) == Approx(12.0).margin(1e-12));
}

TEST_CASE("make_solution recomputes the total") {
  ktc::Rng rng(11);
  ktc::Instance inst = testutil::random_instance(9, 3, rng);
  ktc::Solution sol = ktc::make_solution(inst, {ktc::Tour{{0, 1, 2}}, ktc::Tour{{3, 4}},
                                                ktc::Tour{{5, 6, 7}}, ktc::Tour{{8}}});
  double expect = 0.0;
  for (const ktc::Tour& t : sol.tours) expect += ktc::tour_cost(inst, t);
  CHECK(sol.cost == Approx(expect).margin(1e-12));
  CHECK(ktc::validate(inst, sol).ok());
}

TEST_CASE("validate flags every violation kind") {
  ktc::Instance inst;
  inst.capacity = 2;
  inst.points = {{1.0, 0.0}, {2.0, 0.0}, {3.0, 0.0}};

  SECTION("feasible cover passes") {
    const ktc::Solution sol = ktc::make_solution(inst, {ktc::Tour{{0, 1}}, ktc::Tour{{2}}});
    const ktc::ValidationReport report = ktc::validate(inst, sol);
    CHECK(report.ok());
    CHECK(report.recomputed_cost == Approx(sol.cost));
  }

  SECTION("empty tour") {
    ktc::Solution sol = ktc::make_solution(inst, {ktc::Tour{{0, 1}}, ktc::Tour{{2}}});
    sol.tours.push_back(ktc::Tour{});
    const auto report = ktc::validate(inst, sol);
    REQUIRE(!report.ok());
    CHECK(report.violations[0].kind == ktc::violation_kind::empty_tour);
  }

  SECTION("capacity exceeded") {
    const ktc::Solution sol = ktc::make_solution(inst, {ktc::Tour{{0, 1, 2}}});
    const auto report = ktc::validate(inst, sol);
    REQUIRE(!report.ok());
    CHECK(report.violations[0].kind == ktc::violation_kind::capacity_exceeded);
    CHECK(report.violations[0].tour == 0);
  }

  SECTION("invalid index") {
    ktc::Solution sol;
    sol.tours = {ktc::Tour{{0, 1}}, ktc::Tour{{7}}};
    const auto report = ktc::validate(inst, sol);
    REQUIRE(!report.ok());
    bool found = false;
    for (const auto& v : report.violations)
      found = found || v.kind == ktc::violation_kind::invalid_index;
    CHECK(found);
  }

  SECTION("duplicate and missing") {
    ktc::Solution sol = ktc::make_solution(inst, {ktc::Tour{{0, 1}}, ktc::Tour{{1}}});
    const auto report = ktc::validate(inst, sol);
    REQUIRE(!report.ok());
    bool dup = false, missing = false;
    for (const auto& v : report.violations) {
      dup = dup || (v.kind == ktc::violation_kind::duplicate_index && v.index == 1);
      missing = missing || (v.kind == ktc::violation_kind::missing_index && v.index == 2);
    }
    CHECK(dup);
    CHECK(missing);
  }

  SECTION("cost mismatch") {
    ktc::Solution sol = ktc::make_solution(inst, {ktc::Tour{{0, 1}}, ktc::Tour{{2}}});
    sol.cost += 1.0;
    const auto report = ktc::validate(inst, sol);
    REQUIRE(!report.ok());
    CHECK(report.violations[0].kind == ktc::violation_kind::cost_mismatch);
  }
}

TEST_CASE("validate accepts the empty instance and empty solution") {
  ktc::Instance inst;
  CHECK(ktc::validate(inst, ktc::Solution{}).ok());
}
