#include "stochcuts/benders.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace stochcuts {

RecourseSolver::RecourseSolver(const Instance& instance, LpOptions options)
    : instance_(&instance), options_(options) {
  for (double d : instance.second_stage_cost) lp_.AddVariable(d, 0.0, kInf);
  for (int r = 0; r < instance.num_recourse_rows(); ++r) {
    std::vector<int> idx;
    std::vector<double> val;
    for (const Triplet& t : instance.recourse.Row(r)) {
      idx.push_back(t.col);
      val.push_back(t.value);
    }
    lp_.AddRow(idx, val, RowSense::kGreaterEqual, 0.0);
  }
}

SubproblemResult RecourseSolver::Solve(const AggregatedScenario& data,
                                       std::span<const double> x) const {
  if (static_cast<int>(x.size()) != instance_->num_first()) {
    throw std::invalid_argument("first-stage point has wrong length");
  }
  const std::vector<double> tx = data.technology.Multiply(x);
  for (int r = 0; r < lp_.num_rows(); ++r) lp_.rows[r].rhs = data.rhs[r] - tx[r];
  const LpResult lp = SolveLp(lp_, options_);
  SubproblemResult out;
  out.cluster = data.cluster;
  switch (lp.status) {
    case LpStatus::kOptimal:
      out.feasible = true;
      out.value = lp.objective;
      out.duals = lp.duals;
      break;
    case LpStatus::kInfeasible:
      out.feasible = false;
      out.value = kInf;
      out.duals = lp.farkas;
      break;
    case LpStatus::kUnbounded:
      throw std::runtime_error("recourse LP unbounded");
  }
  return out;
}

SubproblemResult RecourseSolver::SolveScenario(int s,
                                               std::span<const double> x) const {
  const std::vector<int> one{s};
  return Solve(Aggregate(*instance_, one), x);
}

SubproblemResult SolveScenarioSubproblem(const Instance& instance, int s,
                                         std::span<const double> x) {
  return RecourseSolver(instance).SolveScenario(s, x);
}

SubproblemResult SolveClusterSubproblem(const Instance& instance,
                                        const AggregatedScenario& data,
                                        std::span<const double> x) {
  return RecourseSolver(instance).Solve(data, x);
}

namespace {

// x coefficients dual^T T and rhs dual.h
void DualForm(const Instance& instance, const SparseMatrix& technology,
              const std::vector<double>& rhs, const std::vector<double>& dual,
              Cut& cut) {
  if (static_cast<int>(dual.size()) != instance.num_recourse_rows()) {
    throw std::invalid_argument("dual vector has wrong length");
  }
  cut.x_coeffs = technology.TransposeMultiply(dual);
  cut.rhs = 0.0;
  for (std::size_t r = 0; r < dual.size(); ++r) cut.rhs += dual[r] * rhs[r];
}

}  // namespace

Cut MakeBendersCut(const Instance& instance, int s,
                   const std::vector<double>& dual) {
  const Scenario& sc = instance.scenarios.at(s);
  Cut cut;
  cut.kind = CutKind::kBenders;
  DualForm(instance, sc.technology, sc.rhs, dual, cut);
  cut.theta_coeffs = {{s, 1.0}};
  cut.origin = {s};
  cut.generating_dual = dual;
  return cut;
}

Cut MakePbBenC(const Instance& instance, const AggregatedScenario& data,
               const std::vector<double>& dual) {
  Cut cut;
  cut.kind = CutKind::kPbBenC;
  DualForm(instance, data.technology, data.rhs, dual, cut);
  cut.theta_coeffs = ThetaWeights(data.cluster, instance);
  cut.origin = data.cluster;
  cut.generating_dual = dual;
  return cut;
}

Cut MakeFeasibilityCut(const Instance& instance, const AggregatedScenario& data,
                       const std::vector<double>& ray) {
  Cut cut;
  cut.kind = CutKind::kFeasibility;
  DualForm(instance, data.technology, data.rhs, ray, cut);
  cut.origin = data.cluster;
  cut.generating_dual = ray;
  return cut;
}

std::vector<double> ThetaLowerBounds(const Instance& in,
                                     const LpOptions& options) {
  const int n1 = in.num_first();
  std::vector<double> out;
  for (int s = 0; s < in.num_scenarios(); ++s) {
    const Scenario& sc = in.scenarios[s];
    LpModel lp;
    for (int j = 0; j < n1; ++j) lp.AddVariable(0.0, 0.0, in.FirstStageUpper(j));
    for (double d : in.second_stage_cost) lp.AddVariable(d, 0.0, kInf);
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
      for (const Triplet& t : sc.technology.Row(r)) {
        idx.push_back(t.col);
        val.push_back(t.value);
      }
      for (const Triplet& t : in.recourse.Row(r)) {
        idx.push_back(n1 + t.col);
        val.push_back(t.value);
      }
      lp.AddRow(idx, val, RowSense::kGreaterEqual, sc.rhs[r]);
    }
    const LpResult r = SolveLp(lp, options);
    if (r.status != LpStatus::kOptimal) {
      throw std::runtime_error("cannot bound theta for scenario " +
                               std::to_string(s) + ": " + ToString(r.status));
    }
    out.push_back(r.objective);
  }
  return out;
}

Master::Master(const Instance& instance, std::vector<double> theta_lower,
               LpOptions options)
    : instance_(&instance),
      theta_lower_(std::move(theta_lower)),
      options_(options) {
  if (static_cast<int>(theta_lower_.size()) != instance.num_scenarios()) {
    throw std::invalid_argument("one theta lower bound per scenario expected");
  }
}

bool Master::AddCut(Cut cut) {
  if (static_cast<int>(cut.x_coeffs.size()) != instance_->num_first()) {
    throw std::invalid_argument("cut has wrong x dimension");
  }
  for (const Cut& c : cuts_) {
    if (NearDuplicate(c, cut)) return false;
  }
  cuts_.push_back(std::move(cut));
  active_.push_back(true);
  idle_rounds_.push_back(0);
  return true;
}

int Master::Count(CutKind kind) const {
  int n = 0;
  for (const Cut& c : cuts_) n += c.kind == kind;
  return n;
}

int Master::num_active() const {
  int n = 0;
  for (bool a : active_) n += a;
  return n;
}

LpModel Master::BuildLp(bool all_cuts) const {
  const Instance& in = *instance_;
  const int n1 = in.num_first();
  LpModel lp;
  for (int j = 0; j < n1; ++j) {
    lp.AddVariable(in.first_stage_cost[j], 0.0, in.FirstStageUpper(j));
  }
  for (int s = 0; s < in.num_scenarios(); ++s) {
    lp.AddVariable(in.scenarios[s].probability, theta_lower_[s], kInf);
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
  for (std::size_t k = 0; k < cuts_.size(); ++k) {
    if (!all_cuts && !active_[k]) continue;
    const Cut& c = cuts_[k];
    std::vector<int> idx;
    std::vector<double> val;
    for (int j = 0; j < n1; ++j) {
      if (c.x_coeffs[j] != 0.0) {
        idx.push_back(j);
        val.push_back(c.x_coeffs[j]);
      }
    }
    for (const auto& [s, w] : c.theta_coeffs) {
      idx.push_back(n1 + s);
      val.push_back(w);
    }
    lp.AddRow(idx, val, RowSense::kGreaterEqual, c.rhs);
  }
  return lp;
}

namespace {

MasterSolution Split(const Instance& in, const std::vector<double>& v,
                     double objective) {
  MasterSolution out;
  out.x.assign(v.begin(), v.begin() + in.num_first());
  out.theta.assign(v.begin() + in.num_first(), v.end());
  out.objective = objective;
  out.bound = objective;
  return out;
}

}  // namespace

MasterSolution Master::SolveRelaxation() {
  constexpr int kIdleLimit = 3;
  const int keep = 2 * (instance_->num_first() + instance_->num_scenarios());
  if (num_active() > keep) {
    for (std::size_t k = 0; k < cuts_.size(); ++k) {
      if (active_[k] && idle_rounds_[k] >= kIdleLimit) active_[k] = false;
    }
  }
  while (true) {
    const LpModel lp = BuildLp(false);
    const LpResult r = SolveLp(lp, options_);
    if (r.status != LpStatus::kOptimal) {
      throw std::runtime_error(std::string("master LP ") + ToString(r.status));
    }
    MasterSolution sol = Split(*instance_, r.x, r.objective);
    bool added = false;
    for (std::size_t k = 0; k < cuts_.size(); ++k) {
      const double slack = cuts_[k].Slack(sol.x, sol.theta);
      const double scale = 1.0 + std::abs(cuts_[k].rhs);
      if (!active_[k]) {
        if (slack < -1e-9 * scale) {
          active_[k] = true;
          idle_rounds_[k] = 0;
          added = true;
        }
      }
    }
    if (added) continue;
    for (std::size_t k = 0; k < cuts_.size(); ++k) {
      if (!active_[k]) continue;
      const double slack = cuts_[k].Slack(sol.x, sol.theta);
      if (slack > 1e-6 * (1.0 + std::abs(cuts_[k].rhs))) {
        ++idle_rounds_[k];
      } else {
        idle_rounds_[k] = 0;
      }
    }
    return sol;
  }
}

MasterSolution Master::SolveInteger(const MipOptions& options) {
  MipModel mip;
  mip.lp = BuildLp(true);
  mip.integer.assign(mip.lp.num_vars(), false);
  for (int j = 0; j < instance_->num_first(); ++j) {
    mip.integer[j] = instance_->IsInteger(j);
  }
  const MipResult r = SolveMip(mip, options);
  if (r.status == MipStatus::kInfeasible || r.status == MipStatus::kUnbounded ||
      r.x.empty()) {
    throw std::runtime_error(std::string("master MIP ") + ToString(r.status));
  }
  MasterSolution sol = Split(*instance_, r.x, r.objective);
  sol.bound = r.bound;
  return sol;
}

double EvaluateFirstStage(const Instance& in, std::span<const double> x) {
  RecourseSolver solver(in);
  double total = 0.0;
  for (int j = 0; j < in.num_first(); ++j) total += in.first_stage_cost[j] * x[j];
  for (int s = 0; s < in.num_scenarios(); ++s) {
    const SubproblemResult r = solver.SolveScenario(s, x);
    if (!r.feasible) return kInf;
    total += in.scenarios[s].probability * r.value;
  }
  return total;
}

}  // namespace stochcuts
