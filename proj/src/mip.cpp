#include "stochcuts/mip.hpp"

#include <chrono>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>

namespace stochcuts {

void MipModel::Validate() const {
  lp.Validate();
  if (static_cast<int>(integer.size()) != lp.num_vars()) {
    throw std::invalid_argument("integrality marks do not match variables");
  }
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (integer[j] &&
        (!std::isfinite(lp.lower[j]) || !std::isfinite(lp.upper[j]))) {
      throw std::invalid_argument("integer variable " + std::to_string(j) +
                                  " needs finite bounds");
    }
  }
}

const char* ToString(MipStatus status) {
  switch (status) {
    case MipStatus::kOptimal:
      return "Optimal";
    case MipStatus::kInfeasible:
      return "Infeasible";
    case MipStatus::kUnbounded:
      return "Unbounded";
    case MipStatus::kBudgetExceeded:
      return "BudgetExceeded";
  }
  return "?";
}

namespace {

struct Node {
  long id = 0;
  double bound = 0.0;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> x;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

// Index of the most fractional integer variable, -1 if integral.
int BranchingVariable(const std::vector<bool>& integer,
                      const std::vector<double>& x, double tol) {
  int best = -1;
  double best_score = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!integer[j]) continue;
    const double frac = x[j] - std::floor(x[j]);
    const double score = std::min(frac, 1.0 - frac);
    if (score > tol && score > best_score) {
      best_score = score;
      best = static_cast<int>(j);
    }
  }
  return best;
}

}  // namespace

MipResult SolveMip(const MipModel& model, const MipOptions& options) {
  model.Validate();
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  };

  MipResult result;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long next_id = 0;
  double gap_pruned_bound = kInf;

  auto gap_tol = [&](double incumbent) {
    return options.relative_gap * (1.0 + std::abs(incumbent));
  };

  // Solves a node LP; returns false when the node is infeasible.
  auto evaluate = [&](Node& node) -> LpStatus {
    ++result.nodes;
    const LpResult lp =
        SolveLpWithBounds(model.lp, node.lower, node.upper, options.lp);
    if (lp.status != LpStatus::kOptimal) return lp.status;
    node.bound = lp.objective;
    node.x = lp.x;
    return lp.status;
  };

  auto consider = [&](Node&& node) {
    const int j = BranchingVariable(model.integer, node.x,
                                    options.integrality_tol);
    if (j < 0) {
      if (node.bound < result.objective) {
        result.objective = node.bound;
        result.x = node.x;
        for (std::size_t k = 0; k < result.x.size(); ++k) {
          if (model.integer[k]) result.x[k] = std::round(result.x[k]);
        }
      }
      return;
    }
    if (node.bound >= result.objective - gap_tol(result.objective)) {
      gap_pruned_bound = std::min(gap_pruned_bound, node.bound);
      return;
    }
    open.push(std::move(node));
  };

  Node root;
  root.id = next_id++;
  root.lower = model.lp.lower;
  root.upper = model.lp.upper;
  const LpStatus root_status = evaluate(root);
  if (root_status == LpStatus::kInfeasible) {
    result.status = MipStatus::kInfeasible;
    result.bound = kInf;
    return result;
  }
  if (root_status == LpStatus::kUnbounded) {
    result.status = MipStatus::kUnbounded;
    return result;
  }
  consider(std::move(root));

  bool budget_hit = false;
  while (!open.empty()) {
    Node node = open.top();
    open.pop();
    if (node.bound >= result.objective - gap_tol(result.objective)) {
      gap_pruned_bound = std::min(gap_pruned_bound, node.bound);
      continue;
    }
    if (elapsed() > options.time_budget_seconds) {
      open.push(std::move(node));
      budget_hit = true;
      break;
    }
    const int j = BranchingVariable(model.integer, node.x,
                                    options.integrality_tol);
    const double v = node.x[j];
    for (int side = 0; side < 2; ++side) {
      Node child;
      child.id = next_id++;
      child.lower = node.lower;
      child.upper = node.upper;
      if (side == 0) {
        child.upper[j] = std::floor(v);
      } else {
        child.lower[j] = std::ceil(v);
      }
      const LpStatus st = evaluate(child);
      if (st == LpStatus::kOptimal) {
        consider(std::move(child));
      } else if (st == LpStatus::kUnbounded) {
        result.status = MipStatus::kUnbounded;
        result.bound = -kInf;
        return result;
      }
    }
  }

  double bound = std::min(result.objective, gap_pruned_bound);
  if (!open.empty()) bound = std::min(bound, open.top().bound);
  result.bound = bound;
  if (budget_hit) {
    result.status = MipStatus::kBudgetExceeded;
  } else if (std::isfinite(result.objective)) {
    result.status = MipStatus::kOptimal;
  } else {
    result.status = MipStatus::kInfeasible;
    result.bound = kInf;
  }
  return result;
}

std::vector<EnumeratedPoint> EnumerateBinary(const MipModel& model, long cap,
                                             const LpOptions& lp) {
  model.Validate();
  std::vector<int> ints;
  for (int j = 0; j < model.lp.num_vars(); ++j) {
    if (!model.integer[j]) continue;
    if (model.lp.lower[j] < 0.0 || model.lp.upper[j] > 1.0) {
      throw std::invalid_argument("variable " + std::to_string(j) +
                                  " is not binary");
    }
    ints.push_back(j);
  }
  if (ints.size() >= 62 || (1L << ints.size()) > cap) {
    throw std::invalid_argument("enumeration cap exceeded: 2^" +
                                std::to_string(ints.size()) + " > " +
                                std::to_string(cap));
  }
  std::vector<EnumeratedPoint> out;
  std::vector<double> lower = model.lp.lower;
  std::vector<double> upper = model.lp.upper;
  const long count = 1L << ints.size();
  for (long mask = 0; mask < count; ++mask) {
    bool empty_box = false;
    for (std::size_t k = 0; k < ints.size(); ++k) {
      const double v = (mask >> (ints.size() - 1 - k)) & 1L ? 1.0 : 0.0;
      const int j = ints[k];
      if (v < model.lp.lower[j] || v > model.lp.upper[j]) empty_box = true;
      lower[ints[k]] = v;
      upper[ints[k]] = v;
    }
    if (empty_box) continue;
    const LpResult r = SolveLpWithBounds(model.lp, lower, upper, lp);
    if (r.status == LpStatus::kUnbounded) {
      throw std::runtime_error("unbounded continuous completion");
    }
    if (r.status == LpStatus::kOptimal) out.push_back({r.x, r.objective});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const EnumeratedPoint& a, const EnumeratedPoint& b) {
                     return a.objective < b.objective;
                   });
  return out;
}

}  // namespace stochcuts
