#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stochcuts/benders.hpp"
#include "stochcuts/drivers.hpp"
#include "stochcuts/instance_io.hpp"

using namespace stochcuts;

namespace {

double ExtensiveOptimum(const Instance& in) {
  const MipResult r = SolveMip(BuildExtensive(in));
  REQUIRE(r.status == MipStatus::kOptimal);
  return r.objective;
}

double ExtensiveLp(const Instance& in) {
  const LpResult r = SolveLp(BuildExtensive(in).lp);
  REQUIRE(r.status == LpStatus::kOptimal);
  return r.objective;
}

Instance SmallSslp(int seed, int scenarios = 6) {
  GeneratorConfig cfg;
  cfg.sites = 4;
  cfg.clients = 8;
  cfg.scenarios = scenarios;
  cfg.seed = seed;
  return GenerateSslp(cfg);
}

void CheckTraceInvariants(const RunTrace& t, int scenarios) {
  REQUIRE_FALSE(t.events.empty());
  CHECK(t.events.back().kind == EventKind::kTermination);
  CHECK(t.events.back().note == t.termination);
  int refinements = 0;
  for (size_t i = 0; i < t.events.size(); ++i) {
    const TraceEvent& e = t.events[i];
    CHECK(e.partition_size >= 1);
    CHECK(e.partition_size <= scenarios);
    if (e.kind == EventKind::kRefinement) ++refinements;
    CHECK(e.refinements == refinements);
    if (i == 0) continue;
    const TraceEvent& prev = t.events[i - 1];
    CHECK(e.wall_seconds >= prev.wall_seconds);
    CHECK(e.z_lb >= prev.z_lb);
    CHECK(e.z_ub <= prev.z_ub);
    CHECK(e.ccut >= prev.ccut);
    CHECK(e.fcut >= prev.fcut);
    CHECK(e.partition_size >= prev.partition_size);
  }
  CHECK(t.final_lb == t.events.back().z_lb);
  CHECK(t.final_partition.size() == t.events.back().partition_size);
}

RunConfig Config(Algorithm a) {
  RunConfig cfg;
  cfg.algorithm = a;
  return cfg;
}

}  // namespace

TEST_CASE("algorithm names round trip") {
  for (Algorithm a : {Algorithm::kBenders, Algorithm::kBdd, Algorithm::kAlg1,
                      Algorithm::kApblagc}) {
    CHECK(ParseAlgorithm(ToString(a)) == a);
  }
  CHECK_THROWS_AS(ParseAlgorithm("simplex"), std::invalid_argument);
}

TEST_CASE("config validation") {
  RunConfig cfg;
  cfg.kappa1 = 0.0;
  CHECK_THROWS_AS(cfg.Validate(), std::invalid_argument);
  cfg = RunConfig{};
  cfg.stall_fraction = 1.0;
  CHECK_THROWS_AS(cfg.Validate(), std::invalid_argument);
  cfg = RunConfig{};
  cfg.time_limit_seconds = -1.0;
  CHECK_THROWS_AS(RunBenders(Builtin("thm1"), cfg), std::invalid_argument);
}

TEST_CASE("thm1 bounds by algorithm") {
  const Instance in = Builtin("thm1");
  const RunTrace benders = RunBenders(in, {});
  CHECK(benders.algorithm == "benders");
  CHECK(benders.final_lb == doctest::Approx(0.0));
  CHECK(benders.termination == "converged");

  const RunTrace bdd = RunBdd(in, {});
  CHECK(bdd.final_lb == doctest::Approx(0.0));
  CHECK(bdd.termination == "saturated");

  const RunTrace ap = RunApblagc(in, {});
  CHECK(ap.final_lb == doctest::Approx(0.5));

  const RunTrace alg1 = RunAlg1(in, {});
  CHECK(alg1.final_lb == doctest::Approx(0.5));
  CHECK(alg1.final_ub == doctest::Approx(0.5));
  CHECK(alg1.termination == "gap_closed");
  CHECK(alg1.final_partition.size() == 1);
}

TEST_CASE("Benders matches the extensive LP relaxation") {
  for (int seed = 0; seed < 4; ++seed) {
    const Instance in = SmallSslp(seed);
    const RunTrace t = RunBenders(in, {});
    CHECK(t.final_lb == doctest::Approx(ExtensiveLp(in)).epsilon(1e-6));
    CHECK(t.events.back().ccut == 0);
    CheckTraceInvariants(t, in.num_scenarios());
  }
}

TEST_CASE("bound ordering on generated instances") {
  for (int seed = 0; seed < 3; ++seed) {
    const Instance in = SmallSslp(seed);
    const double opt = ExtensiveOptimum(in);
    const double benders = RunBenders(in, {}).final_lb;
    const RunTrace bdd = RunBdd(in, {});
    const RunTrace ap = RunApblagc(in, {});
    const double tol = 1e-6 * (1.0 + std::abs(opt));
    CHECK(benders <= bdd.final_lb + tol);
    CHECK(bdd.final_lb <= opt + tol);
    CHECK(ap.final_lb <= opt + tol);
    CHECK(benders <= ap.final_lb + tol);
    CheckTraceInvariants(bdd, in.num_scenarios());
    CheckTraceInvariants(ap, in.num_scenarios());
    const RunTrace alg1 = RunAlg1(in, {});
    CHECK(alg1.final_lb == doctest::Approx(opt).epsilon(1e-6));
    CHECK(alg1.final_ub == doctest::Approx(opt).epsilon(1e-6));
    CheckTraceInvariants(alg1, in.num_scenarios());
  }
}

TEST_CASE("B&D closes the gap with one binary first-stage variable") {
  RunConfig cfg;
  cfg.stall_rule = false;
  for (int seed = 0; seed < 15; ++seed) {
    const Instance in = Builtin("dim1-random-" + std::to_string(seed));
    const RunTrace t = RunBdd(in, cfg);
    CHECK(t.final_lb == doctest::Approx(ExtensiveOptimum(in)).epsilon(1e-6));
  }
}

TEST_CASE("Alg1 with a huge epsilon stops after one partition problem") {
  const Instance in = SmallSslp(7);
  RunConfig cfg;
  cfg.epsilon = 1e9;
  const RunTrace t = RunAlg1(in, cfg);
  CHECK(t.termination == "gap_closed");
  CHECK(t.final_partition.size() == 1);
  CHECK(t.events.size() == 2);
  CHECK(t.events[0].note == "partition_mip");
}

TEST_CASE("Alg1 from singletons solves the extensive form") {
  const Instance in = SmallSslp(8, 3);
  RunConfig cfg;
  cfg.initial_partition = Partition::Singletons(in.num_scenarios());
  const RunTrace t = RunAlg1(in, cfg);
  CHECK(t.termination == "gap_closed");
  CHECK(t.events.size() == 2);
  CHECK(t.final_lb == doctest::Approx(ExtensiveOptimum(in)).epsilon(1e-6));
}

TEST_CASE("identical scenarios never split") {
  Instance in = Builtin("dim1-random-3");
  for (Scenario& s : in.scenarios) s = in.scenarios[0];
  for (Scenario& s : in.scenarios) s.probability = 1.0 / in.num_scenarios();
  const RunTrace ap = RunApblagc(in, {});
  CHECK(ap.final_partition.size() == 1);
  CHECK(ap.final_lb == doctest::Approx(ExtensiveOptimum(in)).epsilon(1e-6));
  const RunTrace alg1 = RunAlg1(in, {});
  CHECK(alg1.final_partition.size() == 1);
}

TEST_CASE("integral LP relaxation gives no Lagrangian cut") {
  // One binary with cost 1 and a recourse that ignores it.
  Instance in;
  in.name = "integral";
  in.first_stage_cost = {1.0};
  in.first_stage_matrix = SparseMatrix::FromTriplets(0, 1, {});
  in.first_stage_types = {VarType::kBinary};
  in.second_stage_cost = {1.0};
  in.recourse = SparseMatrix::FromTriplets(1, 1, {{0, 0, 1.0}});
  in.scenarios.push_back({1.0, SparseMatrix::FromTriplets(1, 1, {}), {2.0}});
  const RunTrace t = RunBdd(in, {});
  CHECK(t.termination == "saturated");
  CHECK(t.lagrangian_rounds == 1);
  for (const Cut& c : t.cuts) CHECK(c.kind != CutKind::kLagrangian);
  CHECK(t.final_lb == doctest::Approx(2.0));
}

TEST_CASE("zero time limit ends every algorithm with time_limit") {
  const Instance in = SmallSslp(1);
  RunConfig cfg;
  cfg.time_limit_seconds = 0.0;
  for (Algorithm a : {Algorithm::kBenders, Algorithm::kBdd, Algorithm::kAlg1,
                      Algorithm::kApblagc}) {
    cfg.algorithm = a;
    const RunTrace t = Run(in, cfg);
    CHECK(t.timed_out());
    CHECK(t.events.back().kind == EventKind::kTermination);
  }
}

TEST_CASE("runs are deterministic apart from wall time") {
  const Instance in = SmallSslp(2);
  for (Algorithm a : {Algorithm::kBdd, Algorithm::kApblagc}) {
    const RunTrace x = Run(in, Config(a));
    const RunTrace y = Run(in, Config(a));
    REQUIRE(x.events.size() == y.events.size());
    for (size_t i = 0; i < x.events.size(); ++i) {
      CHECK(x.events[i].z_lb == y.events[i].z_lb);
      CHECK(x.events[i].fcut == y.events[i].fcut);
      CHECK(x.events[i].ccut == y.events[i].ccut);
      CHECK(x.events[i].partition_size == y.events[i].partition_size);
    }
    CHECK(x.final_partition == y.final_partition);
  }
}

TEST_CASE("refinement count and cap") {
  const Instance in = Builtin("refinement-example");
  RunConfig cfg;
  cfg.max_refinements = 0;
  const RunTrace t = RunApblagc(in, cfg);
  CHECK(t.final_partition.size() == 1);
  CHECK(t.final_partition.generation() == 0);
  const RunTrace full = RunApblagc(in, {});
  int refinements = 0;
  for (const TraceEvent& e : full.events) {
    refinements += e.kind == EventKind::kRefinement;
  }
  CHECK(full.final_partition.generation() == refinements);
  CheckTraceInvariants(full, in.num_scenarios());
}

TEST_CASE("final MIP master bound is valid") {
  const Instance in = SmallSslp(4);
  RunConfig cfg;
  cfg.final_mip_master = true;
  const RunTrace t = RunApblagc(in, cfg);
  REQUIRE(t.mip_master_lb.has_value());
  CHECK(*t.mip_master_lb >= t.final_lb - 1e-6 * (1 + std::abs(t.final_lb)));
  CHECK(*t.mip_master_lb <= ExtensiveOptimum(in) + 1e-6 * (1 + std::abs(t.final_lb)));
}

TEST_CASE("initial partition must match the instance") {
  RunConfig cfg;
  cfg.initial_partition = Partition::Whole(5);
  CHECK_THROWS_AS(RunApblagc(Builtin("thm1"), cfg), std::invalid_argument);
}
