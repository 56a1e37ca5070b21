#pragma once

#include <vector>

#include "stochcuts/lp.hpp"

namespace stochcuts {

struct MipModel {
  LpModel lp;
  // One flag per LP variable; integer-marked variables need finite bounds.
  std::vector<bool> integer;

  void Validate() const;
};

enum class MipStatus { kOptimal, kInfeasible, kUnbounded, kBudgetExceeded };

const char* ToString(MipStatus status);

struct MipResult {
  MipStatus status = MipStatus::kInfeasible;
  // Incumbent value; +inf when no incumbent exists.
  double objective = kInf;
  std::vector<double> x;
  // Proven lower bound on the optimum.
  double bound = -kInf;
  int nodes = 0;
};

struct MipOptions {
  double integrality_tol = 1e-6;
  double relative_gap = 1e-9;
  double time_budget_seconds = kInf;
  LpOptions lp;
};

// Best-first branch-and-bound on the most fractional variable (lowest index
// on ties; down child before up child).
MipResult SolveMip(const MipModel& model, const MipOptions& options = {});

struct EnumeratedPoint {
  std::vector<double> x;
  double objective = 0.0;
};

// Solves the continuous LP for every 0/1 assignment of the integer variables
// and returns the feasible ones sorted by objective (ties keep assignment
// order). Throws std::invalid_argument when an integer variable is not
// binary or 2^p exceeds `cap`.
std::vector<EnumeratedPoint> EnumerateBinary(const MipModel& model, long cap,
                                             const LpOptions& lp = {});

}  // namespace stochcuts
