#pragma once

// Independent certificate checks for LP results. These recompute every
// quantity from the model and never look at solver internals.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "stochcuts/lp.hpp"

namespace stochcuts::testing {

inline double RowActivity(const LpRow& row, const std::vector<double>& x) {
  double s = 0.0;
  for (std::size_t k = 0; k < row.index.size(); ++k) {
    s += row.value[k] * x[row.index[k]];
  }
  return s;
}

struct OptimalityCheck {
  bool ok = true;
  std::string why;
  double primal_obj = 0.0;
  double dual_obj = 0.0;
};

// Primal feasibility, dual sign conventions, complementary slackness and the
// bounded-variable dual objective.
inline OptimalityCheck CheckOptimal(const LpModel& model, const LpResult& r,
                                    double tol = 1e-7) {
  OptimalityCheck out;
  auto fail = [&](std::string why) {
    if (out.ok) out.why = std::move(why);
    out.ok = false;
  };
  const int n = model.num_vars();
  for (int j = 0; j < n; ++j) {
    if (r.x[j] < model.lower[j] - tol || r.x[j] > model.upper[j] + tol) {
      fail("bound violated on x" + std::to_string(j));
    }
    out.primal_obj += model.objective[j] * r.x[j];
  }
  std::vector<double> reduced(model.objective);
  for (int i = 0; i < model.num_rows(); ++i) {
    const LpRow& row = model.rows[i];
    const double act = RowActivity(row, r.x);
    const double y = r.duals[i];
    const double scale = 1.0 + std::abs(row.rhs);
    switch (row.sense) {
      case RowSense::kGreaterEqual:
        if (act < row.rhs - tol * scale) fail("row violated");
        if (y < -tol) fail("negative dual on >= row");
        break;
      case RowSense::kLessEqual:
        if (act > row.rhs + tol * scale) fail("row violated");
        if (y > tol) fail("positive dual on <= row");
        break;
      case RowSense::kEqual:
        if (std::abs(act - row.rhs) > tol * scale) fail("row violated");
        break;
    }
    if (std::abs(y) > tol && std::abs(act - row.rhs) > 1e-6 * scale) {
      fail("complementary slackness on row " + std::to_string(i));
    }
    out.dual_obj += y * row.rhs;
    for (std::size_t k = 0; k < row.index.size(); ++k) {
      reduced[row.index[k]] -= y * row.value[k];
    }
  }
  for (int j = 0; j < n; ++j) {
    const double d = reduced[j];
    if (d > tol) {
      if (!std::isfinite(model.lower[j])) fail("dual infeasible (lb = -inf)");
      out.dual_obj += d * model.lower[j];
      if (std::abs(r.x[j] - model.lower[j]) > 1e-6) fail("cs on lower bound");
    } else if (d < -tol) {
      if (!std::isfinite(model.upper[j])) fail("dual infeasible (ub = inf)");
      out.dual_obj += d * model.upper[j];
      if (std::abs(r.x[j] - model.upper[j]) > 1e-6) fail("cs on upper bound");
    } else {
      out.dual_obj += d * r.x[j];
    }
  }
  if (std::abs(out.primal_obj - out.dual_obj) >
      tol * (1.0 + std::abs(out.primal_obj))) {
    fail("duality gap " + std::to_string(out.primal_obj - out.dual_obj));
  }
  if (std::abs(out.primal_obj - r.objective) >
      tol * (1.0 + std::abs(out.primal_obj))) {
    fail("reported objective differs from c.x");
  }
  return out;
}

// y sign-feasible and y.b > sup_{box} (A^T y).x.
inline bool CheckFarkas(const LpModel& model, const std::vector<double>& y,
                        double tol = 1e-7) {
  if (static_cast<int>(y.size()) != model.num_rows()) return false;
  std::vector<double> g(model.num_vars(), 0.0);
  double yb = 0.0;
  for (int i = 0; i < model.num_rows(); ++i) {
    const LpRow& row = model.rows[i];
    if (row.sense == RowSense::kGreaterEqual && y[i] < -tol) return false;
    if (row.sense == RowSense::kLessEqual && y[i] > tol) return false;
    yb += y[i] * row.rhs;
    for (std::size_t k = 0; k < row.index.size(); ++k) {
      g[row.index[k]] += y[i] * row.value[k];
    }
  }
  double sup = 0.0;
  for (int j = 0; j < model.num_vars(); ++j) {
    if (std::abs(g[j]) <= 1e-9) continue;
    const double bound = g[j] > 0 ? model.upper[j] : model.lower[j];
    if (!std::isfinite(bound)) return false;
    sup += g[j] * bound;
  }
  return yb - sup > 1e-9;
}

// Random LP that is feasible by construction (a hidden interior-ish point
// satisfies every row) and bounded (every variable has a finite bound in
// the direction its cost pushes, plus a box row over all variables).
inline LpModel RandomFeasibleLp(std::mt19937_64& rng, int max_vars = 40) {
  std::uniform_int_distribution<int> nvar(1, max_vars);
  std::uniform_int_distribution<int> coef(-9, 9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = nvar(rng);
  const int m = std::uniform_int_distribution<int>(1, n + 5)(rng);
  LpModel model;
  std::vector<double> hidden(n);
  for (int j = 0; j < n; ++j) {
    const double kind = unit(rng);
    double lb = 0.0;
    double ub = kInf;
    if (kind < 0.5) {
      lb = 0.0;
      ub = std::uniform_int_distribution<int>(1, 10)(rng);
    } else if (kind < 0.75) {
      lb = -std::uniform_int_distribution<int>(0, 5)(rng);
      ub = kInf;
    } else if (kind < 0.9) {
      lb = -kInf;
      ub = std::uniform_int_distribution<int>(0, 5)(rng);
    } else {
      lb = -kInf;
      ub = kInf;
    }
    hidden[j] = std::isfinite(lb) && std::isfinite(ub)
                    ? lb + unit(rng) * (ub - lb)
                    : (std::isfinite(lb) ? lb + 3 * unit(rng)
                                         : (std::isfinite(ub) ? ub - 3 * unit(rng)
                                                              : 6 * unit(rng) - 3));
    model.AddVariable(static_cast<double>(coef(rng)), lb, ub);
  }
  for (int i = 0; i < m; ++i) {
    std::vector<int> idx;
    std::vector<double> val;
    for (int j = 0; j < n; ++j) {
      if (unit(rng) < 0.5) {
        const int c = coef(rng);
        if (c == 0) continue;
        idx.push_back(j);
        val.push_back(c);
      }
    }
    LpRow row{idx, val, RowSense::kGreaterEqual, 0.0};
    const double act = RowActivity(row, hidden);
    const double s = unit(rng);
    if (s < 0.4) {
      model.AddRow(idx, val, RowSense::kGreaterEqual, std::floor(act) - (unit(rng) < 0.5 ? 0 : 2));
    } else if (s < 0.8) {
      model.AddRow(idx, val, RowSense::kLessEqual, std::ceil(act) + (unit(rng) < 0.5 ? 0 : 2));
    } else {
      model.AddRow(idx, val, RowSense::kEqual, act);
    }
  }
  // |x_j| box through two rows so every direction is bounded.
  std::vector<int> all(n);
  for (int j = 0; j < n; ++j) all[j] = j;
  for (int j = 0; j < n; ++j) {
    model.AddRow({j}, {1.0}, RowSense::kLessEqual, 20.0);
    model.AddRow({j}, {1.0}, RowSense::kGreaterEqual, -20.0);
  }
  return model;
}

// Random LP with a built-in contradiction: two parallel rows a.x >= hi and
// a.x <= lo with lo < hi, buried among random rows.
inline LpModel RandomInfeasibleLp(std::mt19937_64& rng, int max_vars = 30) {
  LpModel model = RandomFeasibleLp(rng, max_vars);
  std::uniform_int_distribution<int> coef(-5, 5);
  const int n = model.num_vars();
  std::vector<int> idx;
  std::vector<double> val;
  for (int j = 0; j < n; ++j) {
    const int c = coef(rng);
    if (c != 0) {
      idx.push_back(j);
      val.push_back(c);
    }
  }
  if (idx.empty()) {
    idx.push_back(0);
    val.push_back(1.0);
  }
  const double lo = std::uniform_int_distribution<int>(-10, 10)(rng);
  model.AddRow(idx, val, RowSense::kLessEqual, lo);
  model.AddRow(idx, val, RowSense::kGreaterEqual, lo + 1.0 + (rng() % 3));
  std::vector<LpRow> rows = model.rows;
  std::shuffle(rows.begin(), rows.end(), rng);
  model.rows = rows;
  return model;
}

}  // namespace stochcuts::testing
