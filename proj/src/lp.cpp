#include "stochcuts/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace stochcuts {

int LpModel::AddVariable(double cost, double lb, double ub) {
  objective.push_back(cost);
  lower.push_back(lb);
  upper.push_back(ub);
  return num_vars() - 1;
}

int LpModel::AddRow(std::vector<int> index, std::vector<double> value,
                    RowSense sense, double rhs) {
  rows.push_back(LpRow{std::move(index), std::move(value), sense, rhs});
  return num_rows() - 1;
}

void LpModel::Validate() const {
  const int n = num_vars();
  if (static_cast<int>(lower.size()) != n ||
      static_cast<int>(upper.size()) != n) {
    throw std::invalid_argument("bound vectors do not match variable count");
  }
  for (int j = 0; j < n; ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j]) ||
        std::isnan(objective[j]) || !std::isfinite(objective[j])) {
      throw std::invalid_argument("non-finite data on variable " +
                                  std::to_string(j));
    }
    if (lower[j] > upper[j]) {
      throw std::invalid_argument("lower > upper on variable " +
                                  std::to_string(j));
    }
  }
  for (int i = 0; i < num_rows(); ++i) {
    const LpRow& row = rows[i];
    if (row.index.size() != row.value.size()) {
      throw std::invalid_argument("row " + std::to_string(i) +
                                  ": index/value length mismatch");
    }
    if (!std::isfinite(row.rhs)) {
      throw std::invalid_argument("row " + std::to_string(i) +
                                  ": non-finite rhs");
    }
    for (std::size_t k = 0; k < row.index.size(); ++k) {
      if (row.index[k] < 0 || row.index[k] >= n) {
        throw std::invalid_argument("row " + std::to_string(i) +
                                    ": column index out of range");
      }
      if (!std::isfinite(row.value[k])) {
        throw std::invalid_argument("row " + std::to_string(i) +
                                    ": non-finite coefficient");
      }
    }
  }
}

const char* ToString(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "Optimal";
    case LpStatus::kInfeasible:
      return "Infeasible";
    case LpStatus::kUnbounded:
      return "Unbounded";
  }
  return "?";
}

namespace {

enum class VarState : unsigned char { kBasic, kAtLower, kAtUpper, kFree };

struct Entry {
  int row;
  double value;
};

// Column layout: [0, n) structural, [n, n + m) slacks, then artificials.
// Every row i reads  a_i . x + s_i (+ sign_i * art_i) = rhs_i.
class Simplex {
 public:
  Simplex(const LpModel& model, const std::vector<double>& lower,
          const std::vector<double>& upper, const LpOptions& options);
  LpResult Solve();

 private:
  enum class PhaseOutcome { kOptimal, kUnbounded };

  bool IsStructural(int j) const { return j < n_; }
  bool IsSlack(int j) const { return j >= n_ && j < n_ + m_; }

  double ColumnDot(int j, const std::vector<double>& y) const;
  void BinvTimesColumn(int j, std::vector<double>& out) const;
  void Refactor();
  void RecomputeBasicValues();
  void ComputeDuals(std::vector<double>& y) const;
  PhaseOutcome RunPhase();
  double MaxPrimalViolation() const;

  const LpOptions& options_;
  std::vector<double> objective_;
  int m_ = 0;
  int n_ = 0;
  int ncol_ = 0;
  std::vector<std::vector<Entry>> columns_;  // structural only
  std::vector<double> rhs_;
  std::vector<int> art_row_;
  std::vector<double> art_sign_;

  std::vector<double> lb_;
  std::vector<double> ub_;
  std::vector<double> cost_;
  std::vector<double> x_;
  std::vector<VarState> state_;
  std::vector<int> basis_;
  std::vector<double> binv_;  // row-major m x m

  bool bland_ = false;
  int stalled_ = 0;
  int pivots_since_refactor_ = 0;
  int iterations_ = 0;
  int iteration_limit_ = 0;
};

Simplex::Simplex(const LpModel& model, const std::vector<double>& lower,
                 const std::vector<double>& upper, const LpOptions& options)
    : options_(options),
      objective_(model.objective),
      m_(model.num_rows()),
      n_(model.num_vars()) {
  columns_.assign(n_, {});
  rhs_.resize(m_);
  for (int i = 0; i < m_; ++i) {
    const LpRow& row = model.rows[i];
    rhs_[i] = row.rhs;
    for (std::size_t k = 0; k < row.index.size(); ++k) {
      if (row.value[k] != 0.0) {
        columns_[row.index[k]].push_back({i, row.value[k]});
      }
    }
  }
  // Merge repeated (row, col) pairs inside a column.
  for (auto& col : columns_) {
    std::stable_sort(col.begin(), col.end(),
                     [](const Entry& a, const Entry& b) { return a.row < b.row; });
    std::vector<Entry> merged;
    for (const Entry& e : col) {
      if (!merged.empty() && merged.back().row == e.row) {
        merged.back().value += e.value;
      } else {
        merged.push_back(e);
      }
    }
    std::erase_if(merged, [](const Entry& e) { return e.value == 0.0; });
    col = std::move(merged);
  }

  lb_ = lower;
  ub_ = upper;
  x_.assign(n_, 0.0);
  state_.assign(n_, VarState::kAtLower);
  for (int j = 0; j < n_; ++j) {
    if (std::isfinite(lb_[j])) {
      state_[j] = VarState::kAtLower;
      x_[j] = lb_[j];
    } else if (std::isfinite(ub_[j])) {
      state_[j] = VarState::kAtUpper;
      x_[j] = ub_[j];
    } else {
      state_[j] = VarState::kFree;
      x_[j] = 0.0;
    }
  }

  std::vector<double> residual = rhs_;
  for (int j = 0; j < n_; ++j) {
    if (x_[j] == 0.0) continue;
    for (const Entry& e : columns_[j]) residual[e.row] -= e.value * x_[j];
  }

  basis_.assign(m_, -1);
  for (int i = 0; i < m_; ++i) {
    double slb = 0.0;
    double sub = 0.0;
    switch (model.rows[i].sense) {
      case RowSense::kLessEqual:
        slb = 0.0;
        sub = kInf;
        break;
      case RowSense::kGreaterEqual:
        slb = -kInf;
        sub = 0.0;
        break;
      case RowSense::kEqual:
        slb = 0.0;
        sub = 0.0;
        break;
    }
    lb_.push_back(slb);
    ub_.push_back(sub);
    const int slack = n_ + i;
    if (residual[i] >= slb && residual[i] <= sub) {
      x_.push_back(residual[i]);
      state_.push_back(VarState::kBasic);
      basis_[i] = slack;
    } else {
      x_.push_back(0.0);
      state_.push_back(std::isfinite(slb) ? VarState::kAtLower
                                          : VarState::kAtUpper);
      art_row_.push_back(i);
      art_sign_.push_back(residual[i] > 0.0 ? 1.0 : -1.0);
    }
  }
  for (std::size_t k = 0; k < art_row_.size(); ++k) {
    const int i = art_row_[k];
    lb_.push_back(0.0);
    ub_.push_back(kInf);
    x_.push_back(std::abs(residual[i]));
    state_.push_back(VarState::kBasic);
    basis_[i] = n_ + m_ + static_cast<int>(k);
  }
  ncol_ = n_ + m_ + static_cast<int>(art_row_.size());
  cost_.assign(ncol_, 0.0);
  iteration_limit_ = 10000 + 50 * (m_ + ncol_);
}

double Simplex::ColumnDot(int j, const std::vector<double>& y) const {
  if (IsStructural(j)) {
    double s = 0.0;
    for (const Entry& e : columns_[j]) s += e.value * y[e.row];
    return s;
  }
  if (IsSlack(j)) return y[j - n_];
  const int k = j - n_ - m_;
  return art_sign_[k] * y[art_row_[k]];
}

void Simplex::BinvTimesColumn(int j, std::vector<double>& out) const {
  out.assign(m_, 0.0);
  if (IsStructural(j)) {
    for (const Entry& e : columns_[j]) {
      for (int p = 0; p < m_; ++p) out[p] += binv_[p * m_ + e.row] * e.value;
    }
    return;
  }
  int row = 0;
  double sign = 1.0;
  if (IsSlack(j)) {
    row = j - n_;
  } else {
    const int k = j - n_ - m_;
    row = art_row_[k];
    sign = art_sign_[k];
  }
  for (int p = 0; p < m_; ++p) out[p] = sign * binv_[p * m_ + row];
}

void Simplex::Refactor() {
  pivots_since_refactor_ = 0;
  if (m_ == 0) return;
  // Gauss-Jordan on [B | I] with partial pivoting.
  std::vector<double> b(static_cast<std::size_t>(m_) * m_, 0.0);
  std::vector<double> col;
  for (int p = 0; p < m_; ++p) {
    const int j = basis_[p];
    if (IsStructural(j)) {
      for (const Entry& e : columns_[j]) b[e.row * m_ + p] = e.value;
    } else if (IsSlack(j)) {
      b[(j - n_) * m_ + p] = 1.0;
    } else {
      const int k = j - n_ - m_;
      b[art_row_[k] * m_ + p] = art_sign_[k];
    }
  }
  std::vector<double> inv(static_cast<std::size_t>(m_) * m_, 0.0);
  for (int i = 0; i < m_; ++i) inv[i * m_ + i] = 1.0;
  for (int c = 0; c < m_; ++c) {
    int piv = c;
    double best = std::abs(b[c * m_ + c]);
    for (int r = c + 1; r < m_; ++r) {
      const double v = std::abs(b[r * m_ + c]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best < 1e-11) throw NumericalError("singular basis during refactor");
    if (piv != c) {
      for (int k = 0; k < m_; ++k) {
        std::swap(b[piv * m_ + k], b[c * m_ + k]);
        std::swap(inv[piv * m_ + k], inv[c * m_ + k]);
      }
    }
    const double d = b[c * m_ + c];
    for (int k = 0; k < m_; ++k) {
      b[c * m_ + k] /= d;
      inv[c * m_ + k] /= d;
    }
    for (int r = 0; r < m_; ++r) {
      if (r == c) continue;
      const double f = b[r * m_ + c];
      if (f == 0.0) continue;
      for (int k = 0; k < m_; ++k) {
        b[r * m_ + k] -= f * b[c * m_ + k];
        inv[r * m_ + k] -= f * inv[c * m_ + k];
      }
    }
  }
  // inv now maps row space to basis positions: inv = B^{-1}.
  binv_ = std::move(inv);
}

void Simplex::RecomputeBasicValues() {
  std::vector<double> residual = rhs_;
  for (int j = 0; j < ncol_; ++j) {
    if (state_[j] == VarState::kBasic || x_[j] == 0.0) continue;
    if (IsStructural(j)) {
      for (const Entry& e : columns_[j]) residual[e.row] -= e.value * x_[j];
    } else if (IsSlack(j)) {
      residual[j - n_] -= x_[j];
    } else {
      const int k = j - n_ - m_;
      residual[art_row_[k]] -= art_sign_[k] * x_[j];
    }
  }
  for (int p = 0; p < m_; ++p) {
    double v = 0.0;
    for (int i = 0; i < m_; ++i) v += binv_[p * m_ + i] * residual[i];
    x_[basis_[p]] = v;
  }
}

void Simplex::ComputeDuals(std::vector<double>& y) const {
  y.assign(m_, 0.0);
  for (int p = 0; p < m_; ++p) {
    const double c = cost_[basis_[p]];
    if (c == 0.0) continue;
    for (int i = 0; i < m_; ++i) y[i] += c * binv_[p * m_ + i];
  }
}

double Simplex::MaxPrimalViolation() const {
  double worst = 0.0;
  for (int p = 0; p < m_; ++p) {
    const int j = basis_[p];
    const double v = x_[j];
    if (v < lb_[j]) worst = std::max(worst, (lb_[j] - v) / (1.0 + std::abs(lb_[j])));
    if (v > ub_[j]) worst = std::max(worst, (v - ub_[j]) / (1.0 + std::abs(ub_[j])));
  }
  return worst;
}

Simplex::PhaseOutcome Simplex::RunPhase() {
  std::vector<double> y;
  std::vector<double> alpha;
  while (true) {
    if (++iterations_ > iteration_limit_) {
      throw NumericalError("simplex iteration limit reached");
    }
    ComputeDuals(y);

    // Pricing.
    int entering = -1;
    double entering_dir = 0.0;
    double best_score = 0.0;
    for (int j = 0; j < ncol_; ++j) {
      const VarState st = state_[j];
      if (st == VarState::kBasic) continue;
      if (lb_[j] == ub_[j]) continue;
      const double d = cost_[j] - ColumnDot(j, y);
      double dir = 0.0;
      if (st == VarState::kAtLower && d < -options_.optimality_tol) {
        dir = 1.0;
      } else if (st == VarState::kAtUpper && d > options_.optimality_tol) {
        dir = -1.0;
      } else if (st == VarState::kFree &&
                 std::abs(d) > options_.optimality_tol) {
        dir = d < 0.0 ? 1.0 : -1.0;
      }
      if (dir == 0.0) continue;
      if (bland_) {
        entering = j;
        entering_dir = dir;
        break;
      }
      if (std::abs(d) > best_score) {
        best_score = std::abs(d);
        entering = j;
        entering_dir = dir;
      }
    }
    if (entering < 0) return PhaseOutcome::kOptimal;

    BinvTimesColumn(entering, alpha);

    // Ratio test. delta[p] is the rate of change of basic p per unit step.
    // Harris two-pass in Dantzig mode, textbook with lowest-index ties under
    // Bland.
    const double ptol = options_.pivot_tol;
    auto ratio_for = [&](int p, double slack_tol) {
      const int j = basis_[p];
      const double delta = -entering_dir * alpha[p];
      if (delta < -ptol && std::isfinite(lb_[j])) {
        return std::max(0.0, (x_[j] - lb_[j] + slack_tol) / -delta);
      }
      if (delta > ptol && std::isfinite(ub_[j])) {
        return std::max(0.0, (ub_[j] - x_[j] + slack_tol) / delta);
      }
      return kInf;
    };

    int leave = -1;
    double step = kInf;
    if (bland_) {
      for (int p = 0; p < m_; ++p) {
        const double r = ratio_for(p, 0.0);
        if (r == kInf) continue;
        if (leave < 0 || r < step - 1e-12 ||
            (r <= step + 1e-12 && basis_[p] < basis_[leave])) {
          step = leave < 0 ? r : std::min(step, r);
          leave = p;
        }
      }
    } else {
      double relaxed = kInf;
      for (int p = 0; p < m_; ++p) {
        relaxed = std::min(relaxed, ratio_for(p, 1e-9));
      }
      if (relaxed < kInf) {
        double best_alpha = -1.0;
        for (int p = 0; p < m_; ++p) {
          const double r = ratio_for(p, 0.0);
          if (r <= relaxed && std::abs(alpha[p]) > best_alpha) {
            best_alpha = std::abs(alpha[p]);
            leave = p;
            step = r;
          }
        }
      }
    }

    const double range = ub_[entering] - lb_[entering];
    const bool flip = std::isfinite(range) && range <= step;
    if (flip) {
      step = range;
      leave = -1;
    }
    if (!std::isfinite(step)) return PhaseOutcome::kUnbounded;

    if (step <= 1e-12) {
      if (++stalled_ > options_.stall_limit) bland_ = true;
    } else {
      stalled_ = 0;
    }

    // Move.
    x_[entering] += entering_dir * step;
    for (int p = 0; p < m_; ++p) {
      x_[basis_[p]] -= entering_dir * alpha[p] * step;
    }

    if (flip) {
      state_[entering] =
          entering_dir > 0 ? VarState::kAtUpper : VarState::kAtLower;
      x_[entering] = entering_dir > 0 ? ub_[entering] : lb_[entering];
      continue;
    }

    const int leaving = basis_[leave];
    const double delta = -entering_dir * alpha[leave];
    if (delta < 0.0) {
      state_[leaving] = VarState::kAtLower;
      x_[leaving] = lb_[leaving];
    } else {
      state_[leaving] = VarState::kAtUpper;
      x_[leaving] = ub_[leaving];
    }

    const double piv = alpha[leave];
    if (std::abs(piv) < 1e-12) throw NumericalError("vanishing pivot element");
    double* row_r = &binv_[leave * m_];
    for (int k = 0; k < m_; ++k) row_r[k] /= piv;
    for (int p = 0; p < m_; ++p) {
      if (p == leave || alpha[p] == 0.0) continue;
      const double f = alpha[p];
      double* row_p = &binv_[p * m_];
      for (int k = 0; k < m_; ++k) row_p[k] -= f * row_r[k];
    }
    basis_[leave] = entering;
    state_[entering] = VarState::kBasic;

    if (++pivots_since_refactor_ >= options_.refactor_interval) {
      Refactor();
      RecomputeBasicValues();
    }
  }
}

LpResult Simplex::Solve() {
  LpResult result;
  Refactor();
  RecomputeBasicValues();

  double rhs_scale = 1.0;
  for (double v : rhs_) rhs_scale = std::max(rhs_scale, std::abs(v));

  if (!art_row_.empty()) {
    std::fill(cost_.begin(), cost_.end(), 0.0);
    for (int j = n_ + m_; j < ncol_; ++j) cost_[j] = 1.0;
    RunPhase();
    Refactor();
    RecomputeBasicValues();
    RunPhase();
    double infeasibility = 0.0;
    for (int j = n_ + m_; j < ncol_; ++j) infeasibility += x_[j];
    if (infeasibility > options_.feasibility_tol * rhs_scale) {
      result.status = LpStatus::kInfeasible;
      ComputeDuals(result.farkas);
      result.iterations = iterations_;
      return result;
    }
    for (int j = n_ + m_; j < ncol_; ++j) {
      ub_[j] = 0.0;
      if (state_[j] != VarState::kBasic) {
        state_[j] = VarState::kAtLower;
        x_[j] = 0.0;
      }
    }
    bland_ = false;
    stalled_ = 0;
  }

  std::fill(cost_.begin(), cost_.end(), 0.0);
  std::copy(objective_.begin(), objective_.end(), cost_.begin());
  PhaseOutcome outcome = RunPhase();
  if (outcome == PhaseOutcome::kUnbounded) {
    result.status = LpStatus::kUnbounded;
    result.iterations = iterations_;
    return result;
  }
  // Clean up drift and confirm optimality on a fresh factorization.
  Refactor();
  RecomputeBasicValues();
  outcome = RunPhase();
  if (outcome == PhaseOutcome::kUnbounded) {
    result.status = LpStatus::kUnbounded;
    result.iterations = iterations_;
    return result;
  }
  Refactor();
  RecomputeBasicValues();
  if (MaxPrimalViolation() > 10.0 * options_.feasibility_tol) {
    throw NumericalError("primal infeasibility after refactorization");
  }

  result.status = LpStatus::kOptimal;
  result.x.assign(x_.begin(), x_.begin() + n_);
  for (int j = 0; j < n_; ++j) {
    result.x[j] = std::clamp(result.x[j], lb_[j], ub_[j]);
  }
  ComputeDuals(result.duals);
  result.reduced_costs.resize(n_);
  result.objective = 0.0;
  for (int j = 0; j < n_; ++j) {
    result.reduced_costs[j] = objective_[j] - ColumnDot(j, result.duals);
    result.objective += objective_[j] * result.x[j];
  }
  result.iterations = iterations_;
  return result;
}

}  // namespace

LpResult SolveLp(const LpModel& model, const LpOptions& options) {
  model.Validate();
  Simplex simplex(model, model.lower, model.upper, options);
  return simplex.Solve();
}

LpResult SolveLpWithBounds(const LpModel& model, const std::vector<double>& lower,
                           const std::vector<double>& upper,
                           const LpOptions& options) {
  const int n = model.num_vars();
  if (static_cast<int>(lower.size()) != n ||
      static_cast<int>(upper.size()) != n) {
    throw std::invalid_argument("bound override length mismatch");
  }
  for (int j = 0; j < n; ++j) {
    if (lower[j] > upper[j]) {
      // Crossed bounds: infeasible, no row certificate.
      LpResult r;
      r.status = LpStatus::kInfeasible;
      return r;
    }
  }
  Simplex simplex(model, lower, upper, options);
  return simplex.Solve();
}

}  // namespace stochcuts
