#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "stochcuts/instance_io.hpp"
#include "stochcuts/model.hpp"

using namespace stochcuts;

namespace {

Instance ThreeScenario() {
  Instance in;
  in.name = "three";
  in.first_stage_cost = {1.0, -1.0};
  in.first_stage_matrix = SparseMatrix::FromTriplets(1, 2, {{0, 0, 1.0}, {0, 1, 1.0}});
  in.first_stage_rhs = {1.0};
  in.first_stage_types = {VarType::kBinary, VarType::kContinuous};
  in.first_stage_upper = {1.0, 4.0};
  in.second_stage_cost = {1.0, 2.0};
  in.recourse = SparseMatrix::FromTriplets(2, 2, {{0, 0, 1.0}, {1, 1, 1.0}});
  for (double p : {0.2, 0.3, 0.5}) {
    in.scenarios.push_back(
        {p, SparseMatrix::FromTriplets(2, 2, {{0, 0, p}, {1, 1, -1.0}}),
         {1.0, p}});
  }
  return in;
}

}  // namespace

TEST_CASE("validate accepts a well formed instance") {
  CHECK(Validate(ThreeScenario()).empty());
  CHECK(Validate(Builtin("thm1")).empty());
}

TEST_CASE("validate reports probability sums") {
  Instance in = Builtin("thm1");
  in.scenarios[0].probability = 0.6;
  in.scenarios[1].probability = 0.6;
  const auto v = Validate(in);
  REQUIRE(v.size() == 1);
  CHECK(v[0] == "probabilities sum to 1.2");
}

TEST_CASE("validate reports T row mismatch") {
  Instance in = Builtin("thm1");
  in.scenarios[0].technology = SparseMatrix::FromTriplets(3, 2, {});
  const auto v = Validate(in);
  REQUIRE(v.size() == 1);
  CHECK(v[0] == "scenario 0: T row count mismatch");
}

TEST_CASE("validate reports other violations") {
  Instance in = ThreeScenario();
  in.scenarios[1].rhs.pop_back();
  in.scenarios[2].probability = -0.1;
  in.first_stage_types.pop_back();
  const auto v = Validate(in);
  CHECK(v.size() >= 3);
  Instance none = ThreeScenario();
  none.scenarios.clear();
  CHECK(Validate(none) == std::vector<std::string>{"scenarios: no scenarios"});
  CHECK_THROWS_AS(RequireValid(none), std::invalid_argument);
}

TEST_CASE("extensive form of thm1 has 2 binaries, 2 recourse vars, 4 rows") {
  const MipModel m = BuildExtensive(Builtin("thm1"));
  CHECK(m.lp.num_vars() == 4);
  CHECK(m.lp.num_rows() == 4);
  CHECK(m.integer == std::vector<bool>{true, true, false, false});
  CHECK(m.lp.upper[0] == 1.0);
}

TEST_CASE("extensive dimensions for three scenarios") {
  const Instance in = ThreeScenario();
  const MipModel m = BuildExtensive(in);
  CHECK(m.lp.num_vars() == 2 + 6);
  CHECK(m.lp.num_rows() == 1 + 6);
  CHECK(m.lp.rows[0].sense == RowSense::kEqual);
  CHECK(ExtensiveSecondStageIndex(in, 2, 1) == 7);
  CHECK(m.lp.objective[7] == doctest::Approx(0.5 * 2.0));
  CHECK(m.lp.upper[1] == 4.0);
}

TEST_CASE("single scenario extensive form is the deterministic problem") {
  Instance in = ThreeScenario();
  in.scenarios.resize(1);
  in.scenarios[0].probability = 1.0;
  const MipModel m = BuildExtensive(in);
  CHECK(m.lp.num_vars() == 4);
  CHECK(m.lp.objective[2] == 1.0);
  CHECK(m.lp.objective[3] == 2.0);
}

TEST_CASE("extensive objective matches the two-stage objective at any point") {
  const Instance in = ThreeScenario();
  const MipModel m = BuildExtensive(in);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> v(m.lp.num_vars());
    for (double& x : v) x = u(rng);
    double direct = 0.0;
    for (int j = 0; j < in.num_first(); ++j) direct += in.first_stage_cost[j] * v[j];
    for (int s = 0; s < in.num_scenarios(); ++s) {
      for (int k = 0; k < in.num_second(); ++k) {
        direct += in.scenarios[s].probability * in.second_stage_cost[k] *
                  v[ExtensiveSecondStageIndex(in, s, k)];
      }
    }
    double via_model = 0.0;
    for (int j = 0; j < m.lp.num_vars(); ++j) via_model += m.lp.objective[j] * v[j];
    CHECK(via_model == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("theta weights") {
  Instance in = ThreeScenario();
  in.scenarios[0].probability = 0.2;
  in.scenarios[1].probability = 0.6;
  in.scenarios[2].probability = 0.2;
  const std::vector<int> c{1, 0};
  const auto w = ThetaWeights(c, in);
  REQUIRE(w.size() == 2);
  CHECK(w[0].first == 0);
  CHECK(w[0].second == doctest::Approx(0.25));
  CHECK(w[1].second == doctest::Approx(0.75));

  const std::vector<int> single{2};
  const auto u = ThetaWeights(single, in);
  REQUIRE(u.size() == 1);
  CHECK(u[0].second == 1.0);

  const auto half = ThetaWeights(std::vector<int>{0, 1}, Builtin("thm1"));
  CHECK(half[0].second == 0.5);
  CHECK(half[1].second == 0.5);

  CHECK_THROWS_WITH(ThetaWeights(std::vector<int>{}, in), "empty cluster");
}

TEST_CASE("theta weights form a probability vector") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const Instance in = Builtin("dim1-random-" + std::to_string(trial));
    std::vector<int> cluster;
    for (int s = 0; s < in.num_scenarios(); ++s) {
      if (rng() % 2 || cluster.empty()) cluster.push_back(s);
    }
    double total = 0.0;
    for (const auto& [s, w] : ThetaWeights(cluster, in)) {
      CHECK(w > 0.0);
      total += w;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("cut evaluation and near-duplicate test") {
  Cut a;
  a.x_coeffs = {1.0, 2.0};
  a.theta_coeffs = {{0, 0.5}, {2, 0.5}};
  a.rhs = 3.0;
  const std::vector<double> x{1.0, 1.0};
  const std::vector<double> theta{2.0, 9.0, 0.0};
  CHECK(a.Lhs(x, theta) == doctest::Approx(4.0));
  CHECK(a.Slack(x, theta) == doctest::Approx(1.0));

  Cut b = a;
  for (double& v : b.x_coeffs) v *= 2.0;
  for (auto& [s, w] : b.theta_coeffs) w *= 2.0;
  b.rhs *= 2.0;
  CHECK(NearDuplicate(a, b));
  b.theta_coeffs = {{0, 1.0}, {1, 1.0}};
  CHECK_FALSE(NearDuplicate(a, b));
  Cut c = a;
  c.rhs = 3.1;
  CHECK_FALSE(NearDuplicate(a, c));
}
