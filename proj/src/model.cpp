#include "stochcuts/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace stochcuts {

int Instance::num_integer() const {
  return static_cast<int>(std::count_if(
      first_stage_types.begin(), first_stage_types.end(),
      [](VarType t) { return t != VarType::kContinuous; }));
}

double Instance::FirstStageUpper(int j) const {
  double ub = first_stage_upper.empty() ? kInf : first_stage_upper[j];
  if (first_stage_types[j] == VarType::kBinary) ub = std::min(ub, 1.0);
  return ub;
}

bool Instance::operator==(const Instance& o) const {
  if (name != o.name || first_stage_cost != o.first_stage_cost ||
      !(first_stage_matrix == o.first_stage_matrix) ||
      first_stage_rhs != o.first_stage_rhs ||
      first_stage_types != o.first_stage_types ||
      second_stage_cost != o.second_stage_cost || !(recourse == o.recourse) ||
      scenarios.size() != o.scenarios.size()) {
    return false;
  }
  for (int j = 0; j < num_first(); ++j) {
    if (FirstStageUpper(j) != o.FirstStageUpper(j)) return false;
  }
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    const Scenario& a = scenarios[s];
    const Scenario& b = o.scenarios[s];
    if (a.probability != b.probability || !(a.technology == b.technology) ||
        a.rhs != b.rhs) {
      return false;
    }
  }
  return true;
}

std::vector<std::string> Validate(const Instance& in) {
  std::vector<std::string> v;
  const int n1 = in.num_first();
  const int n2 = in.num_second();
  const int m1 = in.first_stage_matrix.rows();
  const int m2 = in.recourse.rows();

  if (static_cast<int>(in.first_stage_types.size()) != n1) {
    v.push_back("first_stage_types: length " +
                std::to_string(in.first_stage_types.size()) + " != n1 " +
                std::to_string(n1));
  }
  if (!in.first_stage_upper.empty() &&
      static_cast<int>(in.first_stage_upper.size()) != n1) {
    v.push_back("first_stage_upper: length mismatch");
  }
  if (in.first_stage_matrix.cols() != n1) {
    v.push_back("first_stage_matrix: column count mismatch");
  }
  if (static_cast<int>(in.first_stage_rhs.size()) != m1) {
    v.push_back("first_stage_rhs: length mismatch");
  }
  if (in.recourse.cols() != n2) {
    v.push_back("recourse: column count mismatch");
  }
  if (in.scenarios.empty()) v.push_back("scenarios: no scenarios");

  double total = 0.0;
  for (std::size_t s = 0; s < in.scenarios.size(); ++s) {
    const Scenario& sc = in.scenarios[s];
    const std::string where = "scenario " + std::to_string(s) + ": ";
    if (!(sc.probability > 0.0)) v.push_back(where + "probability not positive");
    total += sc.probability;
    if (sc.technology.rows() != m2) v.push_back(where + "T row count mismatch");
    if (sc.technology.cols() != n1) {
      v.push_back(where + "T column count mismatch");
    }
    if (static_cast<int>(sc.rhs.size()) != m2) {
      v.push_back(where + "h length mismatch");
    }
  }
  if (!in.scenarios.empty() && std::abs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "probabilities sum to " << total;
    v.push_back(os.str());
  }
  if (static_cast<int>(in.first_stage_types.size()) == n1) {
    for (int j = 0; j < n1; ++j) {
      const double ub = in.FirstStageUpper(j);
      if (ub < 0.0) {
        v.push_back("first_stage_upper[" + std::to_string(j) + "]: negative");
      }
    }
  }
  return v;
}

void RequireValid(const Instance& instance) {
  const auto problems = Validate(instance);
  if (problems.empty()) return;
  std::string msg = "invalid instance:";
  for (const auto& p : problems) msg += " [" + p + "]";
  throw std::invalid_argument(msg);
}

MipModel BuildExtensive(const Instance& in) {
  const int n1 = in.num_first();
  const int n2 = in.num_second();
  MipModel mip;
  LpModel& lp = mip.lp;
  for (int j = 0; j < n1; ++j) {
    lp.AddVariable(in.first_stage_cost[j], 0.0, in.FirstStageUpper(j));
    mip.integer.push_back(in.IsInteger(j));
  }
  for (const Scenario& sc : in.scenarios) {
    for (int k = 0; k < n2; ++k) {
      lp.AddVariable(sc.probability * in.second_stage_cost[k], 0.0, kInf);
      mip.integer.push_back(false);
    }
  }
  for (int r = 0; r < in.num_first_rows(); ++r) {
    LpRow row;
    for (const Triplet& t : in.first_stage_matrix.Row(r)) {
      row.index.push_back(t.col);
      row.value.push_back(t.value);
    }
    lp.AddRow(row.index, row.value, RowSense::kEqual, in.first_stage_rhs[r]);
  }
  for (int s = 0; s < in.num_scenarios(); ++s) {
    const Scenario& sc = in.scenarios[s];
    for (int r = 0; r < in.num_recourse_rows(); ++r) {
      LpRow row;
      for (const Triplet& t : sc.technology.Row(r)) {
        row.index.push_back(t.col);
        row.value.push_back(t.value);
      }
      for (const Triplet& t : in.recourse.Row(r)) {
        row.index.push_back(ExtensiveSecondStageIndex(in, s, t.col));
        row.value.push_back(t.value);
      }
      lp.AddRow(row.index, row.value, RowSense::kGreaterEqual, sc.rhs[r]);
    }
  }
  return mip;
}

SparseWeights ThetaWeights(std::span<const int> cluster,
                           const Instance& instance) {
  if (cluster.empty()) throw std::invalid_argument("empty cluster");
  double total = 0.0;
  for (int s : cluster) {
    if (s < 0 || s >= instance.num_scenarios()) {
      throw std::out_of_range("scenario index " + std::to_string(s));
    }
    total += instance.scenarios[s].probability;
  }
  SparseWeights w;
  for (int s : cluster) {
    w.emplace_back(s, instance.scenarios[s].probability / total);
  }
  std::sort(w.begin(), w.end());
  return w;
}

const char* ToString(CutKind kind) {
  switch (kind) {
    case CutKind::kBenders:
      return "Benders";
    case CutKind::kPbBenC:
      return "PbBenC";
    case CutKind::kLagrangian:
      return "Lagrangian";
    case CutKind::kPbLagC:
      return "PbLagC";
    case CutKind::kFeasibility:
      return "Feasibility";
  }
  return "?";
}

double Cut::Lhs(std::span<const double> x,
                std::span<const double> theta) const {
  double s = 0.0;
  for (std::size_t j = 0; j < x_coeffs.size(); ++j) s += x_coeffs[j] * x[j];
  for (const auto& [k, w] : theta_coeffs) s += w * theta[k];
  return s;
}

bool NearDuplicate(const Cut& a, const Cut& b, double tol) {
  if (a.x_coeffs.size() != b.x_coeffs.size()) return false;
  auto scale_of = [](const Cut& c) {
    double m = std::abs(c.rhs);
    for (double v : c.x_coeffs) m = std::max(m, std::abs(v));
    for (const auto& [k, w] : c.theta_coeffs) m = std::max(m, std::abs(w));
    return m > 0.0 ? m : 1.0;
  };
  const double sa = scale_of(a);
  const double sb = scale_of(b);
  if (std::abs(a.rhs / sa - b.rhs / sb) > tol) return false;
  for (std::size_t j = 0; j < a.x_coeffs.size(); ++j) {
    if (std::abs(a.x_coeffs[j] / sa - b.x_coeffs[j] / sb) > tol) return false;
  }
  // Merge the two sorted sparse theta vectors.
  std::size_t i = 0;
  std::size_t k = 0;
  while (i < a.theta_coeffs.size() || k < b.theta_coeffs.size()) {
    const int ia = i < a.theta_coeffs.size() ? a.theta_coeffs[i].first : 1 << 30;
    const int ib = k < b.theta_coeffs.size() ? b.theta_coeffs[k].first : 1 << 30;
    double va = 0.0;
    double vb = 0.0;
    if (ia <= ib) va = a.theta_coeffs[i++].second / sa;
    if (ib <= ia) vb = b.theta_coeffs[k++].second / sb;
    if (std::abs(va - vb) > tol) return false;
  }
  return true;
}

}  // namespace stochcuts
