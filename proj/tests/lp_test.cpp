#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "lp_checks.hpp"
#include "stochcuts/lp.hpp"

using namespace stochcuts;
using stochcuts::testing::CheckFarkas;
using stochcuts::testing::CheckOptimal;

TEST_CASE("one-variable LP with >= row") {
  LpModel m;
  m.AddVariable(1.0, 0.0, kInf);
  m.AddRow({0}, {1.0}, RowSense::kGreaterEqual, 1.0);
  const LpResult r = SolveLp(m);
  REQUIRE(r.status == LpStatus::kOptimal);
  CHECK(r.objective == doctest::Approx(1.0));
  CHECK(r.duals[0] == doctest::Approx(1.0));
  CHECK(CheckOptimal(m, r).ok);
}

TEST_CASE("unbounded ray") {
  LpModel m;
  m.AddVariable(-1.0, 0.0, kInf);
  m.AddRow({0}, {1.0}, RowSense::kGreaterEqual, 0.0);
  CHECK(SolveLp(m).status == LpStatus::kUnbounded);
}

TEST_CASE("contradictory rows give a Farkas certificate") {
  LpModel m;
  m.AddVariable(0.0, 0.0, kInf);
  m.AddRow({0}, {1.0}, RowSense::kGreaterEqual, 1.0);
  m.AddRow({0}, {1.0}, RowSense::kLessEqual, 0.0);
  const LpResult r = SolveLp(m);
  REQUIRE(r.status == LpStatus::kInfeasible);
  CHECK(CheckFarkas(m, r.farkas));
}

TEST_CASE("thm1 scenario-1 recourse LP") {
  // min z s.t. z - x + y >= 0, z + x - y >= 0 at fixed (x, y).
  auto solve_at = [](double x, double y) {
    LpModel m;
    m.AddVariable(1.0, 0.0, kInf);
    m.AddRow({0}, {1.0}, RowSense::kGreaterEqual, x - y);
    m.AddRow({0}, {1.0}, RowSense::kGreaterEqual, y - x);
    return SolveLp(m);
  };
  const LpResult at00 = solve_at(0, 0);
  REQUIRE(at00.status == LpStatus::kOptimal);
  CHECK(at00.objective == doctest::Approx(0.0));
  const LpResult at10 = solve_at(1, 0);
  REQUIRE(at10.status == LpStatus::kOptimal);
  CHECK(at10.objective == doctest::Approx(1.0));
  CHECK(at10.duals[0] == doctest::Approx(1.0));
  CHECK(at10.duals[1] == doctest::Approx(0.0));
}

TEST_CASE("free and upper-bounded variables") {
  // min -x1 + x2, x1 <= 3 (ub), x2 free, x2 >= x1 - 1.
  LpModel m;
  m.AddVariable(-1.0, -kInf, 3.0);
  m.AddVariable(1.0, -kInf, kInf);
  m.AddRow({1, 0}, {1.0, -1.0}, RowSense::kGreaterEqual, -1.0);
  const LpResult r = SolveLp(m);
  REQUIRE(r.status == LpStatus::kOptimal);
  CHECK(r.objective == doctest::Approx(-1.0));
  CHECK(CheckOptimal(m, r).ok);
}

TEST_CASE("equality rows and negative rhs") {
  LpModel m;
  m.AddVariable(2.0, 0.0, kInf);
  m.AddVariable(3.0, 0.0, kInf);
  m.AddRow({0, 1}, {1.0, 1.0}, RowSense::kEqual, 4.0);
  m.AddRow({0, 1}, {-1.0, 1.0}, RowSense::kLessEqual, -2.0);
  const LpResult r = SolveLp(m);
  REQUIRE(r.status == LpStatus::kOptimal);
  CHECK(r.objective == doctest::Approx(8.0));
  const auto check = CheckOptimal(m, r);
  CHECK_MESSAGE(check.ok, check.why);
}

TEST_CASE("Beale cycling example terminates") {
  // Beale (1955): cycles under Dantzig pricing with naive tie-breaking.
  LpModel m;
  m.AddVariable(-0.75, 0.0, kInf);
  m.AddVariable(150.0, 0.0, kInf);
  m.AddVariable(-0.02, 0.0, kInf);
  m.AddVariable(6.0, 0.0, kInf);
  m.AddRow({0, 1, 2, 3}, {0.25, -60.0, -0.04, 9.0}, RowSense::kLessEqual, 0.0);
  m.AddRow({0, 1, 2, 3}, {0.5, -90.0, -0.02, 3.0}, RowSense::kLessEqual, 0.0);
  m.AddRow({2}, {1.0}, RowSense::kLessEqual, 1.0);
  LpOptions opts;
  opts.stall_limit = 3;
  const LpResult r = SolveLp(m, opts);
  REQUIRE(r.status == LpStatus::kOptimal);
  CHECK(r.objective == doctest::Approx(-0.05));
  CHECK(CheckOptimal(m, r).ok);
  const LpResult r2 = SolveLp(m);
  REQUIRE(r2.status == LpStatus::kOptimal);
  CHECK(r2.objective == doctest::Approx(-0.05));
}

TEST_CASE("solving does not mutate the model and is deterministic") {
  std::mt19937_64 rng(3);
  const LpModel m = stochcuts::testing::RandomFeasibleLp(rng);
  const LpModel copy = m;
  const LpResult a = SolveLp(m);
  const LpResult b = SolveLp(m);
  CHECK(a.x == b.x);
  CHECK(a.duals == b.duals);
  CHECK(m.objective == copy.objective);
}

TEST_CASE("invalid model is rejected") {
  LpModel m;
  m.AddVariable(1.0, 2.0, 1.0);
  CHECK_THROWS_AS(SolveLp(m), std::invalid_argument);
}

TEST_CASE("random LPs: strong duality and Farkas certificates") {
  std::mt19937_64 rng(12345);
  int optimal = 0;
  for (int t = 0; t < 200; ++t) {
    const LpModel m = stochcuts::testing::RandomFeasibleLp(rng);
    const LpResult r = SolveLp(m);
    REQUIRE(r.status == LpStatus::kOptimal);
    const auto check = CheckOptimal(m, r);
    CHECK_MESSAGE(check.ok, "trial " << t << ": " << check.why);
    ++optimal;
  }
  CHECK(optimal == 200);
  for (int t = 0; t < 50; ++t) {
    const LpModel m = stochcuts::testing::RandomInfeasibleLp(rng);
    const LpResult r = SolveLp(m);
    REQUIRE(r.status == LpStatus::kInfeasible);
    CHECK_MESSAGE(CheckFarkas(m, r.farkas), "trial " << t);
  }
}
