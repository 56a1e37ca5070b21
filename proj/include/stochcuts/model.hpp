#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stochcuts/lp.hpp"
#include "stochcuts/mip.hpp"
#include "stochcuts/sparse.hpp"

namespace stochcuts {

enum class VarType { kContinuous, kBinary, kInteger };

struct Scenario {
  double probability = 0.0;
  SparseMatrix technology;  // T^s, m2 x n1
  std::vector<double> rhs;  // h^s, length m2
};

// Two-stage stochastic program with fixed continuous recourse:
//
//   min  c.x + sum_s p^s d.y^s
//   s.t. A x = b
//        T^s x + W y^s >= h^s      for every scenario s
//        x >= 0 (integrality per type, optional upper bounds), y^s >= 0.
//
// Binary variables carry an implicit upper bound of 1. `first_stage_upper` is
// optional (empty means +inf for non-binary variables).
struct Instance {
  std::string name;
  std::vector<double> first_stage_cost;
  SparseMatrix first_stage_matrix;
  std::vector<double> first_stage_rhs;
  std::vector<VarType> first_stage_types;
  std::vector<double> first_stage_upper;
  std::vector<double> second_stage_cost;
  SparseMatrix recourse;
  std::vector<Scenario> scenarios;

  int num_first() const { return static_cast<int>(first_stage_cost.size()); }
  int num_second() const { return static_cast<int>(second_stage_cost.size()); }
  int num_first_rows() const { return first_stage_matrix.rows(); }
  int num_recourse_rows() const { return recourse.rows(); }
  int num_scenarios() const { return static_cast<int>(scenarios.size()); }
  int num_integer() const;

  double FirstStageUpper(int j) const;
  bool IsInteger(int j) const {
    return first_stage_types[j] != VarType::kContinuous;
  }

  bool operator==(const Instance&) const;
};

// Every invariant violation with a field path; empty iff the instance is
// well formed.
std::vector<std::string> Validate(const Instance& instance);

// Throws std::invalid_argument listing the violations.
void RequireValid(const Instance& instance);

// Deterministic equivalent. Variable order: x (n1), then y^0, y^1, ...
MipModel BuildExtensive(const Instance& instance);

// Index of y^s_k in the extensive model.
inline int ExtensiveSecondStageIndex(const Instance& instance, int s, int k) {
  return instance.num_first() + s * instance.num_second() + k;
}

using SparseWeights = std::vector<std::pair<int, double>>;

// w_s = p^s / sum_{s' in cluster} p^{s'} over the (sorted) cluster.
// Throws std::invalid_argument("empty cluster") on an empty cluster.
SparseWeights ThetaWeights(std::span<const int> cluster,
                           const Instance& instance);

enum class CutKind { kBenders, kPbBenC, kLagrangian, kPbLagC, kFeasibility };

const char* ToString(CutKind kind);

// x_coeffs . x + sum_s theta_coeffs_s theta^s >= rhs.
struct Cut {
  CutKind kind = CutKind::kBenders;
  std::vector<double> x_coeffs;
  SparseWeights theta_coeffs;
  double rhs = 0.0;
  std::vector<int> origin;
  // Recourse dual that produced a Benders-type cut (empty otherwise).
  std::vector<double> generating_dual;

  double Lhs(std::span<const double> x, std::span<const double> theta) const;
  double Slack(std::span<const double> x, std::span<const double> theta) const {
    return Lhs(x, theta) - rhs;
  }
};

// True when the two cuts agree coefficientwise within `tol` after scaling
// each by its largest absolute coefficient (rhs included).
bool NearDuplicate(const Cut& a, const Cut& b, double tol = 1e-9);

}  // namespace stochcuts
