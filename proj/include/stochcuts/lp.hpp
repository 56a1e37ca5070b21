#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace stochcuts {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { kLessEqual, kGreaterEqual, kEqual };

struct LpRow {
  std::vector<int> index;
  std::vector<double> value;
  RowSense sense = RowSense::kGreaterEqual;
  double rhs = 0.0;
};

// min objective . x  s.t.  rows,  lower <= x <= upper.
// Bounds may be infinite in either direction.
struct LpModel {
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<LpRow> rows;

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  int AddVariable(double cost, double lb, double ub);
  int AddRow(std::vector<int> index, std::vector<double> value, RowSense sense,
             double rhs);

  // Throws std::invalid_argument describing the first inconsistency.
  void Validate() const;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

const char* ToString(LpStatus status);

// Duals follow the minimization convention: multipliers of >= rows are
// nonnegative, of <= rows nonpositive, and objective = duals . rhs +
// reduced_costs . x at an optimal vertex.
//
// An Infeasible result carries `farkas`: sign-feasible row multipliers y with
// y . rhs > max { (A^T y) . x : lower <= x <= upper }.
struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
  std::vector<double> duals;
  std::vector<double> reduced_costs;
  std::vector<double> farkas;
  int iterations = 0;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LpOptions {
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  // Consecutive degenerate pivots before switching to Bland's rule.
  int stall_limit = 1000;
  int refactor_interval = 64;
};

// Dense bounded-variable revised simplex (two-phase). Deterministic: Dantzig
// pricing with lowest-index ties, Bland fallback after a stall.
LpResult SolveLp(const LpModel& model, const LpOptions& options = {});

// Same as SolveLp with the model's variable bounds replaced.
LpResult SolveLpWithBounds(const LpModel& model, const std::vector<double>& lower,
                           const std::vector<double>& upper,
                           const LpOptions& options = {});

}  // namespace stochcuts
