#include "stochcuts/lagrangian.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "stochcuts/benders.hpp"

namespace stochcuts {

InnerProblem::InnerProblem(const Instance& instance, AggregatedScenario target,
                           MipOptions options)
    : instance_(&instance), target_(std::move(target)), options_(options) {
  const Instance& in = instance;
  const int n1 = in.num_first();
  LpModel& lp = mip_.lp;
  for (int j = 0; j < n1; ++j) {
    lp.AddVariable(0.0, 0.0, in.FirstStageUpper(j));
    mip_.integer.push_back(in.IsInteger(j));
  }
  for (int k = 0; k < in.num_second(); ++k) {
    lp.AddVariable(0.0, 0.0, kInf);
    mip_.integer.push_back(false);
  }
  for (int r = 0; r < in.num_first_rows(); ++r) {
    std::vector<int> idx;
    std::vector<double> val;
    for (const Triplet& t : in.first_stage_matrix.Row(r)) {
      idx.push_back(t.col);
      val.push_back(t.value);
    }
    lp.AddRow(idx, val, RowSense::kEqual, in.first_stage_rhs[r]);
  }
  for (int r = 0; r < in.num_recourse_rows(); ++r) {
    std::vector<int> idx;
    std::vector<double> val;
    for (const Triplet& t : target_.technology.Row(r)) {
      idx.push_back(t.col);
      val.push_back(t.value);
    }
    for (const Triplet& t : in.recourse.Row(r)) {
      idx.push_back(n1 + t.col);
      val.push_back(t.value);
    }
    lp.AddRow(idx, val, RowSense::kGreaterEqual, target_.rhs[r]);
  }
}

InnerSolution InnerProblem::Evaluate(const Multiplier& m) const {
  const Instance& in = *instance_;
  const int n1 = in.num_first();
  if (static_cast<int>(m.pi.size()) != n1 || m.pi0 < 0.0) {
    throw std::invalid_argument("multiplier outside its domain");
  }
  for (int j = 0; j < n1; ++j) mip_.lp.objective[j] = m.pi[j];
  for (int k = 0; k < in.num_second(); ++k) {
    mip_.lp.objective[n1 + k] = m.pi0 * in.second_stage_cost[k];
  }
  ++calls_;
  const MipResult r = SolveMip(mip_, options_);
  if (r.status == MipStatus::kInfeasible) {
    throw std::runtime_error("inner problem infeasible for cluster of size " +
                             std::to_string(target_.cluster.size()));
  }
  if (r.status == MipStatus::kUnbounded || r.x.empty()) {
    throw std::runtime_error(std::string("inner problem ") + ToString(r.status));
  }
  InnerSolution out;
  out.value = std::min(r.bound, r.objective);
  out.x.assign(r.x.begin(), r.x.begin() + n1);
  for (int k = 0; k < in.num_second(); ++k) {
    out.recourse_cost += in.second_stage_cost[k] * r.x[n1 + k];
  }
  return out;
}

const char* ToString(SeparationStatus status) {
  switch (status) {
    case SeparationStatus::kViolatedCutFound:
      return "ViolatedCutFound";
    case SeparationStatus::kNoViolatedCut:
      return "NoViolatedCut";
    case SeparationStatus::kBudgetExceeded:
      return "BudgetExceeded";
  }
  return "?";
}

double ClusterTheta(const Instance& instance, std::span<const int> cluster,
                    std::span<const double> theta) {
  double v = 0.0;
  for (const auto& [s, w] : ThetaWeights(cluster, instance)) v += w * theta[s];
  return v;
}

Cut MakeLagrangianCut(const Instance& instance, std::span<const int> cluster,
                      const Multiplier& m, double value, CutKind kind) {
  Cut cut;
  cut.kind = kind;
  cut.x_coeffs = m.pi;
  if (m.pi0 > 0.0) {
    for (const auto& [s, w] : ThetaWeights(cluster, instance)) {
      cut.theta_coeffs.emplace_back(s, m.pi0 * w);
    }
  }
  cut.rhs = value;
  cut.origin.assign(cluster.begin(), cluster.end());
  return cut;
}

SeparationOutcome Separate(const Instance& instance, const InnerProblem& inner,
                           std::span<const double> xhat, double theta_hat,
                           CutKind kind, const SeparationOptions& options) {
  const int n1 = instance.num_first();
  const RecourseSolver recourse(instance, options.mip.lp);
  const AggregatedScenario& target = inner.target();

  // Outer LP: variables pi (n1), pi0, eta; minimize -eta.
  LpModel outer;
  for (int j = 0; j < n1; ++j) {
    outer.AddVariable(0.0, -options.pi_bound, options.pi_bound);
  }
  const int pi0_col = outer.AddVariable(0.0, 0.0, options.pi0_max);
  const int eta_col = outer.AddVariable(-1.0, -kInf, kInf);

  SeparationOutcome out;
  double best = -kInf;
  auto certify = [&](const Multiplier& m) {
    const InnerSolution sol = inner.Evaluate(m);
    ++out.inner_calls;
    double l = sol.value - m.pi0 * theta_hat;
    for (int j = 0; j < n1; ++j) l -= m.pi[j] * xhat[j];
    if (l > best) {
      best = l;
      out.multiplier = m;
      out.violation = l;
      out.inner_value = sol.value;
    }
    // Pool point (x_j, Q(x_j)); Q(x_j) <= d.y_j keeps the outer LP tight.
    const SubproblemResult q = recourse.Solve(target, sol.x);
    const double v = q.feasible ? std::min(q.value, sol.recourse_cost)
                                : sol.recourse_cost;
    std::vector<int> idx;
    std::vector<double> val;
    for (int j = 0; j < n1; ++j) {
      idx.push_back(j);
      val.push_back(-(sol.x[j] - xhat[j]));
    }
    idx.push_back(pi0_col);
    val.push_back(-(v - theta_hat));
    idx.push_back(eta_col);
    val.push_back(1.0);
    outer.AddRow(idx, val, RowSense::kLessEqual, 0.0);
  };

  certify(Multiplier{std::vector<double>(n1, 0.0), options.pi0_max});
  bool converged = false;
  while (out.inner_calls < options.budget) {
    const LpResult r = SolveLp(outer, options.mip.lp);
    if (r.status != LpStatus::kOptimal) {
      throw std::runtime_error(std::string("separation outer LP ") +
                               ToString(r.status));
    }
    ++out.outer_iterations;
    const double eta = r.x[eta_col];
    if (eta - best <= options.tolerance * (1.0 + std::abs(best))) {
      converged = true;
      break;
    }
    Multiplier m;
    m.pi.assign(r.x.begin(), r.x.begin() + n1);
    m.pi0 = std::max(0.0, r.x[pi0_col]);
    certify(m);
  }
  if (!converged && out.inner_calls >= options.budget) {
    // One last outer solve tells whether the final point closed the gap.
    const LpResult r = SolveLp(outer, options.mip.lp);
    if (r.status == LpStatus::kOptimal &&
        r.x[eta_col] - best <= options.tolerance * (1.0 + std::abs(best))) {
      converged = true;
    }
  }

  if (best > options.violation_tol * (1.0 + std::abs(theta_hat))) {
    out.status = SeparationStatus::kViolatedCutFound;
    out.cut = MakeLagrangianCut(instance, target.cluster, out.multiplier,
                                out.inner_value, kind);
  } else if (converged) {
    out.status = SeparationStatus::kNoViolatedCut;
  } else {
    out.status = SeparationStatus::kBudgetExceeded;
  }
  return out;
}

}  // namespace stochcuts
