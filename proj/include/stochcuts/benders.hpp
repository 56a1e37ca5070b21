#pragma once

#include <span>
#include <vector>

#include "stochcuts/lp.hpp"
#include "stochcuts/mip.hpp"
#include "stochcuts/model.hpp"
#include "stochcuts/partition.hpp"

namespace stochcuts {

// Recourse LP  min d.y  s.t.  W y >= rhs - T x,  y >= 0  for one scenario or
// one aggregated cluster.
struct SubproblemResult {
  std::vector<int> cluster;
  bool feasible = false;
  double value = 0.0;
  // Optimal duals of the >= rows when feasible, otherwise a Farkas ray.
  std::vector<double> duals;
};

// Holds the recourse LP skeleton so repeated solves only touch the rhs.
class RecourseSolver {
 public:
  explicit RecourseSolver(const Instance& instance, LpOptions options = {});

  SubproblemResult Solve(const AggregatedScenario& data,
                         std::span<const double> x) const;
  SubproblemResult SolveScenario(int s, std::span<const double> x) const;

 private:
  const Instance* instance_;
  LpOptions options_;
  mutable LpModel lp_;
};

SubproblemResult SolveScenarioSubproblem(const Instance& instance, int s,
                                         std::span<const double> x);
SubproblemResult SolveClusterSubproblem(const Instance& instance,
                                        const AggregatedScenario& data,
                                        std::span<const double> x);

// theta^s >= dual.h^s - (dual^T T^s) x
Cut MakeBendersCut(const Instance& instance, int s,
                   const std::vector<double>& dual);
// theta^P >= dual.hbar - (dual^T Tbar) x with theta^P over the cluster weights.
Cut MakePbBenC(const Instance& instance, const AggregatedScenario& data,
               const std::vector<double>& dual);
// (ray^T T) x >= ray.h from a Farkas ray of an infeasible recourse LP.
Cut MakeFeasibilityCut(const Instance& instance, const AggregatedScenario& data,
                       const std::vector<double>& ray);

// Lower bound on theta^s: min d.y over {(x, y): A x = b, x in its box,
// T^s x + W y >= h^s}. Throws std::runtime_error when that LP is unbounded
// or infeasible.
std::vector<double> ThetaLowerBounds(const Instance& instance,
                                     const LpOptions& options = {});

struct MasterSolution {
  std::vector<double> x;
  std::vector<double> theta;
  double objective = 0.0;
  // For a MIP master solve: proven bound (equals objective for LP solves).
  double bound = 0.0;
};

// Benders master  min c.x + sum_s p^s theta^s  over A x = b, x in its box,
// theta^s >= L_s and the cut pool. LP solves work on an active subset of the
// pool and pull in violated cuts until the whole pool is satisfied.
class Master {
 public:
  Master(const Instance& instance, std::vector<double> theta_lower,
         LpOptions options = {});

  // Returns false (and drops the cut) when it nearly duplicates a pool cut.
  bool AddCut(Cut cut);

  const std::vector<Cut>& cuts() const { return cuts_; }
  int Count(CutKind kind) const;
  int num_active() const;
  const std::vector<double>& theta_lower() const { return theta_lower_; }

  // Throws std::runtime_error if the master is infeasible or unbounded.
  MasterSolution SolveRelaxation();
  MasterSolution SolveInteger(const MipOptions& options = {});

 private:
  LpModel BuildLp(bool all_cuts) const;

  const Instance* instance_;
  std::vector<double> theta_lower_;
  LpOptions options_;
  std::vector<Cut> cuts_;
  std::vector<bool> active_;
  std::vector<int> idle_rounds_;
};

// Expected objective c.x + sum_s p^s f^s(x); +inf if some recourse LP is
// infeasible.
double EvaluateFirstStage(const Instance& instance, std::span<const double> x);

}  // namespace stochcuts
