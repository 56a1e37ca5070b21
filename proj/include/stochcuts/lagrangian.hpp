#pragma once

#include <span>
#include <vector>

#include "stochcuts/mip.hpp"
#include "stochcuts/model.hpp"
#include "stochcuts/partition.hpp"

namespace stochcuts {

struct Multiplier {
  std::vector<double> pi;
  double pi0 = 0.0;
};

struct InnerSolution {
  // Certified lower bound on the inner optimum (the MIP's proven bound).
  double value = 0.0;
  std::vector<double> x;
  // d.y of the returned point.
  double recourse_cost = 0.0;
};

// Inner problem for one target (scenario or aggregated cluster):
//   min pi.x + pi0 d.y  s.t.  A x = b, x in its box with integrality,
//                             Tbar x + W y >= hbar, y >= 0.
class InnerProblem {
 public:
  InnerProblem(const Instance& instance, AggregatedScenario target,
               MipOptions options = {});

  const AggregatedScenario& target() const { return target_; }
  // Throws std::runtime_error when the feasible set is empty.
  InnerSolution Evaluate(const Multiplier& m) const;
  int calls() const { return calls_; }

 private:
  const Instance* instance_;
  AggregatedScenario target_;
  MipOptions options_;
  mutable MipModel mip_;
  mutable int calls_ = 0;
};

struct SeparationOptions {
  // Inner-problem evaluations per call, including the seeding one.
  int budget = 50;
  // Stop when outer value - best certified value <= tol * (1 + |best|).
  double tolerance = 1e-6;
  // Violation threshold: L > violation_tol * (1 + |theta_hat|).
  double violation_tol = 1e-6;
  // Box on pi; pi0 ranges over [0, pi0_max].
  double pi_bound = 1.0;
  double pi0_max = 1.0;
  MipOptions mip;
};

enum class SeparationStatus { kViolatedCutFound, kNoViolatedCut, kBudgetExceeded };

const char* ToString(SeparationStatus status);

struct SeparationOutcome {
  SeparationStatus status = SeparationStatus::kNoViolatedCut;
  Multiplier multiplier;
  // Certified violation Qbar*(pi, pi0) - pi.xhat - pi0 thetahat.
  double violation = 0.0;
  double inner_value = 0.0;
  Cut cut;  // meaningful when a violated cut was found
  int inner_calls = 0;
  int outer_iterations = 0;
};

// Cutting-plane separation of a Lagrangian cut for the target at (xhat,
// theta_hat), where theta_hat is the target's theta value (weighted over the
// cluster). Cut kind is `kind` (kLagrangian or kPbLagC).
SeparationOutcome Separate(const Instance& instance, const InnerProblem& inner,
                           std::span<const double> xhat, double theta_hat,
                           CutKind kind, const SeparationOptions& options = {});

// pi.x + pi0 theta^target >= value with theta coefficients pi0 * weights.
Cut MakeLagrangianCut(const Instance& instance, std::span<const int> cluster,
                      const Multiplier& m, double value, CutKind kind);

// Weighted theta over a cluster: sum_s w_s theta_s.
double ClusterTheta(const Instance& instance, std::span<const int> cluster,
                    std::span<const double> theta);

}  // namespace stochcuts
