#include "stochcuts/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>

#include "stochcuts/drivers.hpp"
#include "stochcuts/instance_io.hpp"

namespace stochcuts {

namespace {

constexpr long kEnumerationCap = 4096;

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string Point(std::span<const double> x) {
  std::string out = "(";
  for (size_t j = 0; j < x.size(); ++j) {
    if (j) out += ",";
    out += Num(x[j]);
  }
  return out + ")";
}

bool AllBinary(const Instance& in) {
  for (VarType t : in.first_stage_types) {
    if (t != VarType::kBinary) return false;
  }
  return true;
}

// Optimum of a MIP whose integers are the binary first-stage variables, by
// enumeration when that is small enough and by branch-and-bound otherwise.
double Optimum(const MipModel& model, bool binary) {
  if (binary) {
    const auto points = EnumerateBinary(model, kEnumerationCap);
    return points.empty() ? kInf : points.front().objective;
  }
  const MipResult r = SolveMip(model);
  if (r.status == MipStatus::kInfeasible) return kInf;
  if (r.status != MipStatus::kOptimal) {
    throw std::runtime_error(std::string("reference MIP ") + ToString(r.status));
  }
  return r.objective;
}

bool Near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

std::string VerificationReport::ToText() const {
  std::ostringstream os;
  os << (pass ? "PASS" : inconclusive ? "INCONCLUSIVE" : "FAIL")
     << " check=" << check << " instance=" << instance
     << " worst=" << Num(worst_violation);
  if (!values.empty()) os << " values=" << Point(values);
  if (!witness.empty()) os << " witness=" << witness;
  if (!note.empty()) os << " note=\"" << note << "\"";
  return os.str();
}

VerificationReport CheckCutValidity(const Instance& instance,
                                    const std::vector<Cut>& cuts,
                                    double tolerance) {
  VerificationReport rep;
  rep.check = "cut_validity";
  rep.instance = instance.name;
  if (!AllBinary(instance)) {
    throw std::invalid_argument("cut validity needs a binary first stage");
  }
  if (instance.num_first() > 12) {
    throw std::invalid_argument("enumeration cap exceeded: 2^" +
                                std::to_string(instance.num_first()) + " > " +
                                std::to_string(kEnumerationCap));
  }
  const int n1 = instance.num_first();
  const int n2 = instance.num_second();
  const auto points = EnumerateBinary(BuildExtensive(instance), kEnumerationCap);
  double worst_slack = kInf;
  for (const EnumeratedPoint& p : points) {
    const std::vector<double> x(p.x.begin(), p.x.begin() + n1);
    std::vector<double> theta(instance.num_scenarios(), 0.0);
    for (int s = 0; s < instance.num_scenarios(); ++s) {
      for (int k = 0; k < n2; ++k) {
        theta[s] += instance.second_stage_cost[k] *
                    p.x[ExtensiveSecondStageIndex(instance, s, k)];
      }
    }
    for (size_t c = 0; c < cuts.size(); ++c) {
      const double slack = cuts[c].Slack(x, theta);
      if (slack < worst_slack) {
        worst_slack = slack;
        if (slack < -tolerance) {
          rep.witness = "x=" + Point(x) + " cut=" + std::to_string(c) + " kind=" +
                        ToString(cuts[c].kind) + " slack=" + Num(slack);
        }
      }
    }
  }
  rep.worst_violation = std::max(0.0, -worst_slack);
  rep.pass = rep.worst_violation <= tolerance;
  rep.note = std::to_string(cuts.size()) + " cuts at " +
             std::to_string(points.size()) + " feasible points";
  if (rep.pass) rep.witness.clear();
  return rep;
}

VerificationReport CheckPbbencDominance(const Instance& instance,
                                        const Cut& pbbenc,
                                        const std::vector<double>& dual) {
  VerificationReport rep;
  rep.check = "pbbenc_dominance";
  rep.instance = instance.name;
  const int n1 = instance.num_first();
  const int m2 = instance.num_recourse_rows();
  if (static_cast<int>(dual.size()) != m2) {
    throw std::invalid_argument("dual has the wrong length");
  }
  const std::vector<int>& cluster = pbbenc.origin;
  double mass = 0.0;
  for (int s : cluster) mass += instance.scenarios[s].probability;

  // Per-scenario cut theta^s >= dual.h^s - (dual^T T^s) x, written as
  // coeff_s . x + theta^s >= rhs_s.
  std::vector<std::vector<double>> coeff(cluster.size(), std::vector<double>(n1));
  std::vector<double> rhs(cluster.size(), 0.0);
  std::vector<double> combo(n1, 0.0);
  double combo_rhs = 0.0;
  double diff = 0.0;
  for (size_t i = 0; i < cluster.size(); ++i) {
    const Scenario& sc = instance.scenarios[cluster[i]];
    for (int r = 0; r < m2; ++r) {
      rhs[i] += dual[r] * sc.rhs[r];
      for (const Triplet& t : sc.technology.Row(r)) {
        coeff[i][t.col] += dual[r] * t.value;
      }
    }
    const double w = sc.probability / mass;
    for (int j = 0; j < n1; ++j) combo[j] += w * coeff[i][j];
    combo_rhs += w * rhs[i];
    double theta_coeff = 0.0;
    for (const auto& [s, v] : pbbenc.theta_coeffs) {
      if (s == cluster[i]) theta_coeff = v;
    }
    diff = std::max(diff, std::abs(theta_coeff - w));
  }
  for (int j = 0; j < n1; ++j) {
    diff = std::max(diff, std::abs(combo[j] - pbbenc.x_coeffs[j]));
  }
  diff = std::max(diff, std::abs(combo_rhs - pbbenc.rhs));
  if (pbbenc.theta_coeffs.size() != cluster.size()) diff = kInf;

  // Weak dominance: at box corners, theta at the scenario-cut minimum.
  double weak = 0.0;
  std::string weak_witness;
  const int corners = n1 <= 12 ? 1 << n1 : 0;
  for (int mask = 0; mask < corners; ++mask) {
    std::vector<double> x(n1);
    for (int j = 0; j < n1; ++j) {
      x[j] = (mask >> j) & 1 ? std::min(1.0, instance.FirstStageUpper(j)) : 0.0;
    }
    std::vector<double> theta(instance.num_scenarios(), 0.0);
    for (size_t i = 0; i < cluster.size(); ++i) {
      double lhs = 0.0;
      for (int j = 0; j < n1; ++j) lhs += coeff[i][j] * x[j];
      theta[cluster[i]] = rhs[i] - lhs;
    }
    const double slack = pbbenc.Slack(x, theta);
    if (-slack > weak) {
      weak = -slack;
      weak_witness = "x=" + Point(x);
    }
  }

  const double tol = 1e-9;
  rep.values = {diff, weak};
  rep.worst_violation = std::max(diff, weak);
  rep.pass = diff <= tol && weak <= tol * (1.0 + std::abs(pbbenc.rhs));
  rep.note = "identity diff " + Num(diff) + "; weak dominance violation " +
             Num(weak) + (corners ? "" : " (corner check skipped, n1 > 12)");
  if (!rep.pass) {
    rep.witness = diff > tol ? "cluster size " + std::to_string(cluster.size())
                             : weak_witness;
  }
  return rep;
}

VerificationReport CheckDim1NoGap(const Instance& instance) {
  if (instance.num_first() != 1) {
    throw std::invalid_argument("dim1 check needs exactly one first-stage variable, got " +
                                std::to_string(instance.num_first()));
  }
  if (!instance.IsInteger(0) || !std::isfinite(instance.FirstStageUpper(0))) {
    throw std::invalid_argument("dim1 check needs a bounded integer variable");
  }
  VerificationReport rep;
  rep.check = "dim1_no_gap";
  rep.instance = instance.name;

  // Extensive optimum: fix x to each integer value and solve the LP.
  const MipModel ext = BuildExtensive(instance);
  double opt = kInf;
  const int upper = static_cast<int>(std::floor(instance.FirstStageUpper(0)));
  for (int v = 0; v <= upper; ++v) {
    LpModel lp = ext.lp;
    lp.lower[0] = lp.upper[0] = v;
    const LpResult r = SolveLp(lp);
    if (r.status == LpStatus::kOptimal) opt = std::min(opt, r.objective);
  }

  RunConfig cfg;
  cfg.stall_rule = false;
  cfg.separation.budget = 500;
  cfg.separation.tolerance = 1e-7;
  cfg.separation.violation_tol = 1e-8;
  const RunTrace t = RunBdd(instance, cfg);
  const double gap = std::abs(opt - t.final_lb);
  rep.values = {t.final_lb, opt};
  rep.worst_violation = gap;
  rep.pass = gap <= 1e-6;
  if (!rep.pass) {
    rep.witness = "lagrangian=" + Num(t.final_lb) + " extensive=" + Num(opt);
    if (t.separation_budget_hits > 0 || t.termination != "saturated") {
      rep.inconclusive = true;
      rep.note = "inconclusive: " + t.termination + ", " +
                 std::to_string(t.separation_budget_hits) +
                 " separation budget hits";
    }
  }
  return rep;
}

VerificationReport CheckThm1Strictness(const Instance& instance,
                                       const Partition* partition) {
  VerificationReport rep;
  rep.check = "thm1_strictness";
  rep.instance = instance.name;
  const double a = RunBenders(instance, {}).final_lb;
  RunConfig closure;
  closure.stall_rule = false;
  const double b = RunBdd(instance, closure).final_lb;
  RunConfig single = closure;
  single.max_refinements = 0;
  single.initial_partition =
      partition ? *partition : Partition::Whole(instance.num_scenarios());
  const double c = RunApblagc(instance, single).final_lb;
  const double ext = Optimum(BuildExtensive(instance), AllBinary(instance));
  rep.values = {a, b, c, ext};

  const double tol = 1e-6;
  rep.worst_violation =
      std::max({std::abs(a), std::abs(b), std::abs(c - 0.5), std::abs(c - ext)});
  rep.pass = Near(a, 0.0, tol) && Near(b, 0.0, tol) && Near(c, 0.5, tol) &&
             Near(c, ext, tol);
  if (!rep.pass) {
    rep.witness = "benders=" + Num(a) + " bdd=" + Num(b) + " pblagc=" + Num(c) +
                  " extensive=" + Num(ext);
    if (Near(a, c, tol) && Near(b, c, tol)) rep.note = "example degenerate";
  }
  return rep;
}

VerificationReport CheckThm1Strictness() {
  return CheckThm1Strictness(Builtin("thm1"));
}

VerificationReport CheckRefinementMonotone(const Instance& instance,
                                           const std::vector<Partition>& chain) {
  if (chain.empty()) throw std::invalid_argument("not a refinement chain: empty");
  for (const Partition& p : chain) {
    if (p.num_scenarios() != instance.num_scenarios()) {
      throw std::invalid_argument("partition does not match the instance");
    }
  }
  for (size_t i = 0; i + 1 < chain.size(); ++i) {
    if (!IsRefinement(chain[i + 1], chain[i])) {
      throw std::invalid_argument("not a refinement chain: link " +
                                  std::to_string(i) + " " + chain[i].ToString() +
                                  " -> " + chain[i + 1].ToString());
    }
  }
  VerificationReport rep;
  rep.check = "refinement_monotone";
  rep.instance = instance.name;
  const bool binary = AllBinary(instance) && instance.num_first() <= 12;
  for (const Partition& p : chain) {
    rep.values.push_back(Optimum(BuildPartitionProblem(instance, p), binary));
  }
  const double tol = 1e-6;
  double worst = 0.0;
  for (size_t i = 0; i + 1 < rep.values.size(); ++i) {
    const double drop = rep.values[i] - rep.values[i + 1];
    if (drop > worst) {
      worst = drop;
      rep.witness = "link " + std::to_string(i) + " " + chain[i + 1].ToString();
    }
  }
  bool finest_ok = true;
  if (chain.back().size() == instance.num_scenarios()) {
    const double ext = Optimum(BuildExtensive(instance), binary);
    const double d = std::abs(ext - rep.values.back());
    worst = std::max(worst, d);
    if (d > tol) {
      finest_ok = false;
      rep.witness = "singletons " + Num(rep.values.back()) + " vs extensive " +
                    Num(ext);
    }
  } else {
    rep.note = "chain does not end at singletons";
  }
  rep.worst_violation = worst;
  rep.pass = worst <= tol && finest_ok;
  if (rep.pass) rep.witness.clear();
  return rep;
}

std::vector<Partition> RandomRefinementChain(int num_scenarios,
                                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Partition> chain{Partition::Whole(num_scenarios)};
  while (chain.back().size() < num_scenarios) {
    std::vector<std::vector<int>> clusters = chain.back().clusters();
    std::vector<int> splittable;
    for (size_t i = 0; i < clusters.size(); ++i) {
      if (clusters[i].size() > 1) splittable.push_back(static_cast<int>(i));
    }
    const int pick = splittable[std::uniform_int_distribution<size_t>(
        0, splittable.size() - 1)(rng)];
    std::vector<int> members = clusters[pick];
    std::shuffle(members.begin(), members.end(), rng);
    const size_t cut =
        std::uniform_int_distribution<size_t>(1, members.size() - 1)(rng);
    clusters[pick].assign(members.begin(), members.begin() + cut);
    clusters.emplace_back(members.begin() + cut, members.end());
    chain.emplace_back(std::move(clusters), num_scenarios,
                       chain.back().generation() + 1);
  }
  return chain;
}

}  // namespace stochcuts
