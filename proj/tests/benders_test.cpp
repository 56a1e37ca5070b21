#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "stochcuts/benders.hpp"
#include "stochcuts/instance_io.hpp"
#include "stochcuts/lagrangian.hpp"

using namespace stochcuts;

namespace {

const std::vector<int> kBoth{0, 1};

// One continuous x in [0,1]; recourse x - y >= 0.5 is infeasible for x < 0.5.
Instance Incomplete() {
  Instance in;
  in.name = "incomplete";
  in.first_stage_cost = {1.0};
  in.first_stage_matrix = SparseMatrix::FromTriplets(0, 1, {});
  in.first_stage_types = {VarType::kContinuous};
  in.first_stage_upper = {1.0};
  in.second_stage_cost = {1.0};
  in.recourse = SparseMatrix::FromTriplets(1, 1, {{0, 0, -1.0}});
  in.scenarios.push_back(
      {1.0, SparseMatrix::FromTriplets(1, 1, {{0, 0, 1.0}}), {0.5}});
  return in;
}

}  // namespace

TEST_CASE("thm1 scenario subproblems") {
  const Instance in = Builtin("thm1");
  const std::vector<double> origin{0.0, 0.0};
  const SubproblemResult s1 = SolveScenarioSubproblem(in, 0, origin);
  REQUIRE(s1.feasible);
  CHECK(s1.value == doctest::Approx(0.0));
  const SubproblemResult s2 = SolveScenarioSubproblem(in, 1, origin);
  REQUIRE(s2.feasible);
  CHECK(s2.value == doctest::Approx(1.0));
  CHECK(s2.duals[0] == doctest::Approx(1.0));
  CHECK(s2.duals[1] == doctest::Approx(0.0));
}

TEST_CASE("recourse value is zero when y = 0 is feasible and d >= 0") {
  const Instance in = Builtin("thm1");
  // Scenario 2 at (1,0): rows read z >= 0 and z >= 0.
  const std::vector<double> x{1.0, 0.0};
  CHECK(SolveScenarioSubproblem(in, 1, x).value == doctest::Approx(0.0));
}

TEST_CASE("strong duality on subproblems") {
  for (int seed = 0; seed < 10; ++seed) {
    const Instance in = Builtin("dim1-random-" + std::to_string(seed));
    for (double xv : {0.0, 0.3, 1.0}) {
      const std::vector<double> x{xv};
      for (int s = 0; s < in.num_scenarios(); ++s) {
        const SubproblemResult r = SolveScenarioSubproblem(in, s, x);
        REQUIRE(r.feasible);
        const auto tx = in.scenarios[s].technology.Multiply(x);
        double dual_value = 0.0;
        for (int i = 0; i < in.num_recourse_rows(); ++i) {
          dual_value += r.duals[i] * (in.scenarios[s].rhs[i] - tx[i]);
        }
        CHECK(std::abs(dual_value - r.value) <= 1e-6);
      }
    }
  }
}

TEST_CASE("cluster subproblem on thm1") {
  const Instance in = Builtin("thm1");
  const AggregatedScenario agg = Aggregate(in, kBoth);
  const std::vector<double> half{0.5, 0.5};
  CHECK(SolveClusterSubproblem(in, agg, half).value == doctest::Approx(0.0));
  const std::vector<double> origin{0.0, 0.0};
  CHECK(SolveClusterSubproblem(in, agg, origin).value == doctest::Approx(0.5));
}

TEST_CASE("singleton cluster equals the scenario subproblem") {
  const Instance in = Builtin("dim1-random-5");
  const std::vector<double> x{1.0};
  for (int s = 0; s < in.num_scenarios(); ++s) {
    const std::vector<int> one{s};
    const SubproblemResult a = SolveClusterSubproblem(in, Aggregate(in, one), x);
    const SubproblemResult b = SolveScenarioSubproblem(in, s, x);
    CHECK(a.value == b.value);
    CHECK(a.duals == b.duals);
  }
}

TEST_CASE("Benders cut from thm1 scenario 2") {
  const Instance in = Builtin("thm1");
  const Cut cut = MakeBendersCut(in, 1, {1.0, 0.0});
  CHECK(cut.kind == CutKind::kBenders);
  // theta^2 >= 1 - x - y
  CHECK(cut.x_coeffs == std::vector<double>{1.0, 1.0});
  CHECK(cut.rhs == 1.0);
  REQUIRE(cut.theta_coeffs.size() == 1);
  CHECK(cut.theta_coeffs[0] == std::pair<int, double>{1, 1.0});

  const Cut zero = MakeBendersCut(in, 0, {0.0, 0.0});
  CHECK(zero.rhs == 0.0);
  CHECK(zero.x_coeffs == std::vector<double>{0.0, 0.0});
}

TEST_CASE("cuts are tight at the generating point") {
  GeneratorConfig cfg;
  cfg.sites = 3;
  cfg.clients = 5;
  cfg.scenarios = 4;
  cfg.seed = 9;
  const Instance in = GenerateSslp(cfg);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> x(in.num_first());
    for (double& v : x) v = u(rng);
    for (int s = 0; s < in.num_scenarios(); ++s) {
      const SubproblemResult r = SolveScenarioSubproblem(in, s, x);
      const Cut cut = MakeBendersCut(in, s, r.duals);
      std::vector<double> theta(in.num_scenarios(), 0.0);
      theta[s] = r.value;
      CHECK(std::abs(cut.Slack(x, theta)) <= 1e-6);
    }
  }
}

TEST_CASE("PbBenC on thm1 with the first aggregated row") {
  const Instance in = Builtin("thm1");
  const Cut cut = MakePbBenC(in, Aggregate(in, kBoth), {1.0, 0.0});
  CHECK(cut.kind == CutKind::kPbBenC);
  // theta^P >= 1/2 - y
  CHECK(cut.x_coeffs[0] == doctest::Approx(0.0));
  CHECK(cut.x_coeffs[1] == doctest::Approx(1.0));
  CHECK(cut.rhs == doctest::Approx(0.5));
  CHECK(cut.theta_coeffs == SparseWeights{{0, 0.5}, {1, 0.5}});
  CHECK(cut.origin == kBoth);
}

TEST_CASE("PbBenC equals the weighted sum of same-dual Benders cuts") {
  for (int seed = 0; seed < 20; ++seed) {
    const Instance in = Builtin("dim1-random-" + std::to_string(seed));
    std::vector<int> all;
    for (int s = 0; s < in.num_scenarios(); ++s) all.push_back(s);
    const AggregatedScenario agg = Aggregate(in, all);
    const std::vector<double> x{0.5};
    const SubproblemResult r = SolveClusterSubproblem(in, agg, x);
    const Cut pb = MakePbBenC(in, agg, r.duals);
    std::vector<double> xc(in.num_first(), 0.0);
    double rhs = 0.0;
    for (const auto& [s, w] : ThetaWeights(all, in)) {
      const Cut b = MakeBendersCut(in, s, r.duals);
      for (int j = 0; j < in.num_first(); ++j) xc[j] += w * b.x_coeffs[j];
      rhs += w * b.rhs;
    }
    for (int j = 0; j < in.num_first(); ++j) {
      CHECK(std::abs(xc[j] - pb.x_coeffs[j]) <= 1e-9);
    }
    CHECK(std::abs(rhs - pb.rhs) <= 1e-9);
  }
}

TEST_CASE("singleton PbBenC matches the Benders cut") {
  const Instance in = Builtin("thm1");
  const std::vector<int> one{1};
  const Cut a = MakePbBenC(in, Aggregate(in, one), {1.0, 0.0});
  const Cut b = MakeBendersCut(in, 1, {1.0, 0.0});
  CHECK(a.x_coeffs == b.x_coeffs);
  CHECK(a.rhs == b.rhs);
  CHECK(a.theta_coeffs == b.theta_coeffs);
}

TEST_CASE("theta lower bounds") {
  const auto thm1 = ThetaLowerBounds(Builtin("thm1"));
  CHECK(thm1 == std::vector<double>{0.0, 0.0});
  GeneratorConfig cfg;
  cfg.sites = 2;
  cfg.clients = 3;
  cfg.scenarios = 3;
  const Instance in = GenerateSslp(cfg);
  const auto lb = ThetaLowerBounds(in);
  const std::vector<double> ones(2, 1.0);
  for (int s = 0; s < 3; ++s) {
    CHECK(lb[s] <= SolveScenarioSubproblem(in, s, ones).value + 1e-9);
  }
}

TEST_CASE("master on thm1") {
  const Instance in = Builtin("thm1");
  Master empty(in, ThetaLowerBounds(in));
  CHECK(empty.SolveRelaxation().objective == doctest::Approx(0.0));

  Master m(in, ThetaLowerBounds(in));
  const AggregatedScenario agg = Aggregate(in, kBoth);
  CHECK(m.AddCut(MakePbBenC(in, agg, {1.0, 0.0})));
  CHECK(m.AddCut(MakePbBenC(in, agg, {0.0, 1.0})));
  Cut scaled = MakePbBenC(in, agg, {1.0, 0.0});
  for (double& v : scaled.x_coeffs) v *= 2.0;
  for (auto& [s, w] : scaled.theta_coeffs) w *= 2.0;
  scaled.rhs *= 2.0;
  CHECK_FALSE(m.AddCut(scaled));
  CHECK(m.Count(CutKind::kPbBenC) == 2);
  CHECK(m.SolveRelaxation().objective == doctest::Approx(0.0).epsilon(1e-9));
  const MasterSolution mip = m.SolveInteger();
  CHECK(mip.objective == doctest::Approx(0.5));

  Master lag(in, ThetaLowerBounds(in));
  lag.AddCut(MakeLagrangianCut(in, kBoth, {{0.0, 0.0}, 1.0}, 0.5,
                               CutKind::kPbLagC));
  CHECK(lag.SolveRelaxation().objective == doctest::Approx(0.5));
}

TEST_CASE("active-set master matches a solve over the full pool") {
  GeneratorConfig cfg;
  cfg.sites = 4;
  cfg.clients = 6;
  cfg.scenarios = 5;
  cfg.seed = 3;
  const Instance in = GenerateSslp(cfg);
  Master m(in, ThetaLowerBounds(in));
  RecourseSolver solver(in);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int round = 0; round < 30; ++round) {
    std::vector<double> x(in.num_first());
    for (double& v : x) v = u(rng);
    for (int s = 0; s < in.num_scenarios(); ++s) {
      m.AddCut(MakeBendersCut(in, s, solver.SolveScenario(s, x).duals));
    }
    const MasterSolution sol = m.SolveRelaxation();
    for (const Cut& c : m.cuts()) {
      CHECK(c.Slack(sol.x, sol.theta) >= -1e-7 * (1 + std::abs(c.rhs)));
    }
  }
  CHECK(m.num_active() <= static_cast<int>(m.cuts().size()));
  // Reference value with every cut as a row.
  Master full(in, ThetaLowerBounds(in));
  for (const Cut& c : m.cuts()) full.AddCut(c);
  const double ref = full.SolveInteger(MipOptions{}).objective;
  CHECK(m.SolveInteger().objective == doctest::Approx(ref).epsilon(1e-9));
  CHECK(m.SolveRelaxation().objective <= ref + 1e-7);
}

TEST_CASE("infeasible recourse gives a Farkas feasibility cut") {
  const Instance in = Incomplete();
  const std::vector<double> zero{0.0};
  const SubproblemResult r = SolveScenarioSubproblem(in, 0, zero);
  REQUIRE_FALSE(r.feasible);
  const Cut cut = MakeFeasibilityCut(in, Aggregate(in, std::vector<int>{0}), r.duals);
  const std::vector<double> theta{0.0};
  CHECK(cut.Slack(zero, theta) < -1e-9);
  const std::vector<double> ok{0.5};
  CHECK(cut.Slack(ok, theta) >= -1e-9);
  const std::vector<double> one{1.0};
  CHECK(cut.Slack(one, theta) >= -1e-9);
  CHECK(EvaluateFirstStage(in, zero) == kInf);
  CHECK(EvaluateFirstStage(in, one) == doctest::Approx(1.0));
}
