#include "stochcuts/drivers.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>

#include "stochcuts/benders.hpp"

namespace stochcuts {

const char* ToString(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kBenders:
      return "benders";
    case Algorithm::kBdd:
      return "bdd";
    case Algorithm::kAlg1:
      return "alg1";
    case Algorithm::kApblagc:
      return "apblagc";
  }
  return "?";
}

Algorithm ParseAlgorithm(const std::string& name) {
  for (Algorithm a : {Algorithm::kBenders, Algorithm::kBdd, Algorithm::kAlg1,
                      Algorithm::kApblagc}) {
    if (name == ToString(a)) return a;
  }
  throw std::invalid_argument("unknown algorithm '" + name +
                              "' (expected benders, bdd, alg1, apblagc)");
}

const char* ToString(EventKind kind) {
  switch (kind) {
    case EventKind::kBendersRound:
      return "benders_round";
    case EventKind::kLagrangianRound:
      return "lagrangian_round";
    case EventKind::kRefinement:
      return "refinement";
    case EventKind::kTermination:
      return "termination";
  }
  return "?";
}

void RunConfig::Validate() const {
  if (!(kappa1 > 0.0)) throw std::invalid_argument("kappa1 must be > 0");
  if (stall_window < 1) throw std::invalid_argument("stall window must be >= 1");
  if (!(stall_fraction > 0.0 && stall_fraction < 1.0)) {
    throw std::invalid_argument("stall fraction must lie in (0,1)");
  }
  if (!(delta_coefficient > 0.0)) {
    throw std::invalid_argument("delta coefficient must be > 0");
  }
  if (!(time_limit_seconds >= 0.0)) {
    throw std::invalid_argument("time limit must be >= 0");
  }
  if (separation.budget < 1) {
    throw std::invalid_argument("separation budget must be >= 1");
  }
}

namespace {

struct TimeLimitHit {};

// Shared state of one run: master, clock and trace.
class Session {
 public:
  Session(const Instance& instance, const RunConfig& config,
          Algorithm algorithm)
      : in_(instance),
        cfg_(config),
        start_(std::chrono::steady_clock::now()),
        recourse_(instance, config.separation.mip.lp) {
    cfg_.algorithm = algorithm;
    cfg_.Validate();
    RequireValid(instance);
    trace_.algorithm = ToString(algorithm);
    trace_.instance = instance.name;
    trace_.scenarios = instance.num_scenarios();
    partition_ = Partition::Singletons(instance.num_scenarios());
  }

  double Elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

  void CheckTime() const {
    if (Elapsed() > cfg_.time_limit_seconds) throw TimeLimitHit{};
  }

  void InitMaster() {
    master_ = std::make_unique<Master>(in_, ThetaLowerBounds(in_),
                                       cfg_.separation.mip.lp);
  }

  Master& master() { return *master_; }

  double Record(double lb) {
    lb_ = std::max(lb_, lb);
    return lb_;
  }

  void Emit(EventKind kind, std::string note = {}) {
    TraceEvent e;
    e.wall_seconds = Elapsed();
    if (!trace_.events.empty()) {
      e.wall_seconds = std::max(e.wall_seconds, trace_.events.back().wall_seconds);
    }
    e.kind = kind;
    e.z_lb = lb_;
    e.z_ub = ub_;
    if (master_) {
      e.ccut = master_->Count(CutKind::kPbLagC);
      e.fcut = master_->Count(CutKind::kBenders) +
               master_->Count(CutKind::kPbBenC) +
               master_->Count(CutKind::kLagrangian) +
               master_->Count(CutKind::kFeasibility);
    }
    e.partition_size = partition_.size();
    e.refinements = refinements_;
    e.note = std::move(note);
    trace_.events.push_back(std::move(e));
  }

  // Benders rounds over the clusters of `partition_` until no violated cut
  // remains. Singleton clusters give classic scenario cuts.
  MasterSolution Saturate(const MasterSolution* start = nullptr) {
    MasterSolution sol;
    bool have = start != nullptr;
    if (have) sol = *start;
    std::vector<AggregatedScenario> data;
    for (const auto& cluster : partition_.clusters()) {
      data.push_back(Aggregate(in_, cluster));
    }
    while (true) {
      CheckTime();
      if (!have) sol = master_->SolveRelaxation();
      have = false;
      Record(sol.objective);
      int added = 0;
      for (const AggregatedScenario& d : data) {
        const SubproblemResult r = recourse_.Solve(d, sol.x);
        if (!r.feasible) {
          added += master_->AddCut(MakeFeasibilityCut(in_, d, r.duals));
          continue;
        }
        const double theta = ClusterTheta(in_, d.cluster, sol.theta);
        if (theta < r.value - 1e-6 * (1.0 + std::abs(theta))) {
          Cut cut = d.cluster.size() == 1 && cfg_.algorithm != Algorithm::kApblagc
                        ? MakeBendersCut(in_, d.cluster[0], r.duals)
                        : MakePbBenC(in_, d, r.duals);
          added += master_->AddCut(std::move(cut));
        }
      }
      Emit(EventKind::kBendersRound);
      if (added == 0) return sol;
    }
  }

  // One separation pass over the clusters; returns the number of cuts added.
  int LagrangianRound(const MasterSolution& sol, CutKind kind) {
    int found = 0;
    for (const auto& cluster : partition_.clusters()) {
      CheckTime();
      auto it = inner_.find(cluster);
      if (it == inner_.end()) {
        it = inner_
                 .emplace(cluster, std::make_unique<InnerProblem>(
                                       in_, Aggregate(in_, cluster),
                                       cfg_.separation.mip))
                 .first;
      }
      const double theta = ClusterTheta(in_, cluster, sol.theta);
      const SeparationOutcome out =
          Separate(in_, *it->second, sol.x, theta, kind, cfg_.separation);
      if (out.status == SeparationStatus::kViolatedCutFound) {
        found += master_->AddCut(out.cut);
      } else if (out.status == SeparationStatus::kBudgetExceeded) {
        ++trace_.separation_budget_hits;
      }
    }
    ++trace_.lagrangian_rounds;
    return found;
  }

  bool Stalled(const std::vector<double>& lb) const {
    const int rounds = static_cast<int>(lb.size()) - 1;
    if (rounds < cfg_.stall_window) return false;
    const double last = lb.back();
    const double recent = last - lb[lb.size() - 1 - cfg_.stall_window];
    const double total = last - lb.front();
    return recent <= cfg_.stall_fraction * total + 1e-9 * (1.0 + std::abs(last));
  }

  bool RoundLimitReached() const {
    return cfg_.max_lagrangian_rounds >= 0 &&
           trace_.lagrangian_rounds >= cfg_.max_lagrangian_rounds;
  }

  std::map<int, std::vector<double>> ScenarioDuals(std::span<const double> x) {
    std::map<int, std::vector<double>> duals;
    for (int s = 0; s < in_.num_scenarios(); ++s) {
      CheckTime();
      duals[s] = recourse_.SolveScenario(s, x).duals;
    }
    return duals;
  }

  RunTrace Finish(const std::string& reason) {
    trace_.termination = reason;
    trace_.final_lb = lb_;
    trace_.final_ub = ub_;
    if (master_) {
      if (cfg_.final_mip_master && reason != "time_limit") {
        MipOptions opt = cfg_.separation.mip;
        trace_.mip_master_lb = master_->SolveInteger(opt).bound;
      }
      trace_.cuts = master_->cuts();
    }
    trace_.final_partition = partition_;
    Emit(EventKind::kTermination, reason);
    trace_.wall_seconds = trace_.events.back().wall_seconds;
    return std::move(trace_);
  }

  const Instance& in_;
  RunConfig cfg_;
  std::chrono::steady_clock::time_point start_;
  RecourseSolver recourse_;
  std::unique_ptr<Master> master_;
  std::map<std::vector<int>, std::unique_ptr<InnerProblem>> inner_;
  Partition partition_;
  int refinements_ = 0;
  double lb_ = -kInf;
  double ub_ = kInf;
  RunTrace trace_;
};

template <typename Body>
RunTrace Guarded(Session& session, Body body) {
  try {
    return session.Finish(body());
  } catch (const TimeLimitHit&) {
    return session.Finish("time_limit");
  }
}

}  // namespace

RunTrace RunBenders(const Instance& instance, const RunConfig& config) {
  Session s(instance, config, Algorithm::kBenders);
  return Guarded(s, [&]() -> std::string {
    s.InitMaster();
    s.Saturate();
    return "converged";
  });
}

RunTrace RunBdd(const Instance& instance, const RunConfig& config) {
  Session s(instance, config, Algorithm::kBdd);
  return Guarded(s, [&]() -> std::string {
    s.InitMaster();
    MasterSolution sol = s.Saturate();
    std::vector<double> lb{s.lb_};
    while (true) {
      if (s.RoundLimitReached()) return "round_limit";
      const int found = s.LagrangianRound(sol, CutKind::kLagrangian);
      s.CheckTime();
      sol = s.master().SolveRelaxation();
      lb.push_back(s.Record(sol.objective));
      s.Emit(EventKind::kLagrangianRound);
      if (found == 0) return "saturated";
      if (s.cfg_.stall_rule && s.Stalled(lb)) return "stalled";
      sol = s.Saturate(&sol);
    }
  });
}

namespace {

// Refines with delta, then delta/2; returns nullopt if nothing splits.
std::optional<Partition> TryRefine(const Partition& p,
                                   const std::map<int, std::vector<double>>& duals,
                                   double delta, DualScaling scaling) {
  for (double d : {delta, 0.5 * delta}) {
    Partition next = Refine(p, duals, d, scaling);
    if (next.size() > p.size()) return next;
  }
  return std::nullopt;
}

}  // namespace

RunTrace RunApblagc(const Instance& instance, const RunConfig& config) {
  Session s(instance, config, Algorithm::kApblagc);
  return Guarded(s, [&]() -> std::string {
    s.partition_ = config.initial_partition.value_or(
        Partition::Whole(instance.num_scenarios()));
    if (s.partition_.num_scenarios() != instance.num_scenarios()) {
      throw std::invalid_argument("initial partition does not match instance");
    }
    s.InitMaster();
    MasterSolution sol = s.Saturate();
    std::vector<double> lb_k{s.lb_};
    const double lb_0_first = s.lb_;
    int k = 0;
    while (true) {
      if (s.RoundLimitReached()) return "round_limit";
      const int found = s.LagrangianRound(sol, CutKind::kPbLagC);
      s.CheckTime();
      sol = s.master().SolveRelaxation();
      lb_k.push_back(s.Record(sol.objective));
      s.Emit(EventKind::kLagrangianRound);

      const bool refine =
          found == 0 || (config.stall_rule && s.Stalled(lb_k));
      if (!refine) {
        sol = s.Saturate(&sol);
        continue;
      }
      if (k >= 1 &&
          lb_k.back() - lb_k.front() < config.kappa1 * (lb_k.back() - lb_0_first)) {
        return "kappa_stop";
      }
      if (config.max_refinements >= 0 && s.refinements_ >= config.max_refinements) {
        return found == 0 ? "saturated" : "stalled";
      }
      const auto next =
          TryRefine(s.partition_, s.ScenarioDuals(sol.x),
                    DeltaSchedule(k + 1, config.delta_coefficient),
                    config.dual_scaling);
      if (!next) return "refinement_exhausted";
      s.partition_ = *next;
      ++k;
      ++s.refinements_;
      s.Emit(EventKind::kRefinement);
      sol = s.Saturate();
      lb_k.assign(1, s.lb_);
    }
  });
}

RunTrace RunAlg1(const Instance& instance, const RunConfig& config) {
  Session s(instance, config, Algorithm::kAlg1);
  return Guarded(s, [&]() -> std::string {
    s.partition_ = config.initial_partition.value_or(
        Partition::Whole(instance.num_scenarios()));
    int n = 0;
    while (true) {
      s.CheckTime();
      MipOptions opt = config.separation.mip;
      opt.time_budget_seconds =
          std::max(0.0, config.time_limit_seconds - s.Elapsed());
      const MipResult r = SolveMip(BuildPartitionProblem(instance, s.partition_), opt);
      if (r.status == MipStatus::kBudgetExceeded) {
        s.Record(r.bound);
        throw TimeLimitHit{};
      }
      if (r.status != MipStatus::kOptimal) {
        throw std::runtime_error(std::string("partition problem ") +
                                 ToString(r.status));
      }
      const double z_n = s.Record(r.bound);
      const std::vector<double> x(r.x.begin(), r.x.begin() + instance.num_first());
      const auto duals = s.ScenarioDuals(x);
      s.ub_ = std::min(s.ub_, EvaluateFirstStage(instance, x));
      s.Emit(EventKind::kBendersRound, "partition_mip");
      const double diff = s.ub_ - z_n;
      if (diff <= config.epsilon * std::max(std::abs(s.ub_), 1e-12) ||
          diff <= 1e-12) {
        return "gap_closed";
      }
      auto next = TryRefine(s.partition_, duals,
                            DeltaSchedule(n + 1, config.delta_coefficient),
                            config.dual_scaling);
      // Fall back to grouping only identical duals.
      if (!next) {
        Partition exact = Refine(s.partition_, duals, 1e-12, DualScaling::kRaw);
        if (exact.size() > s.partition_.size()) next = exact;
      }
      if (!next) return "refinement_exhausted";
      s.partition_ = *next;
      ++n;
      ++s.refinements_;
      s.Emit(EventKind::kRefinement);
    }
  });
}

RunTrace Run(const Instance& instance, const RunConfig& config) {
  switch (config.algorithm) {
    case Algorithm::kBenders:
      return RunBenders(instance, config);
    case Algorithm::kBdd:
      return RunBdd(instance, config);
    case Algorithm::kAlg1:
      return RunAlg1(instance, config);
    case Algorithm::kApblagc:
      return RunApblagc(instance, config);
  }
  throw std::invalid_argument("unknown algorithm");
}

}  // namespace stochcuts
