#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stochcuts/lagrangian.hpp"
#include "stochcuts/model.hpp"
#include "stochcuts/partition.hpp"

namespace stochcuts {

enum class Algorithm { kBenders, kBdd, kAlg1, kApblagc };

const char* ToString(Algorithm algorithm);
// Throws std::invalid_argument on an unknown name.
Algorithm ParseAlgorithm(const std::string& name);

struct RunConfig {
  Algorithm algorithm = Algorithm::kApblagc;
  double kappa1 = 0.2;
  double delta_coefficient = 2.0;
  int stall_window = 5;
  double stall_fraction = 0.05;
  // Off: Lagrangian rounds continue until no violated cut is found.
  bool stall_rule = true;
  double time_limit_seconds = 3600.0;
  // Relative gap for the adaptive partition algorithm.
  double epsilon = 1e-6;
  // Stop refining after this many refinements (negative: unlimited).
  int max_refinements = -1;
  // Hard cap on Lagrangian rounds (negative: unlimited).
  int max_lagrangian_rounds = -1;
  DualScaling dual_scaling = DualScaling::kRaw;
  std::optional<Partition> initial_partition;
  SeparationOptions separation;
  // Solve the master once more with integrality after the cut loop.
  bool final_mip_master = false;
  std::uint64_t seed = 0;

  void Validate() const;
};

enum class EventKind { kBendersRound, kLagrangianRound, kRefinement, kTermination };

const char* ToString(EventKind kind);

struct TraceEvent {
  double wall_seconds = 0.0;
  EventKind kind = EventKind::kBendersRound;
  double z_lb = -kInf;
  double z_ub = kInf;  // +inf when the algorithm tracks no upper bound
  int ccut = 0;        // partition-based Lagrangian cuts
  int fcut = 0;        // Benders, partition Benders and Lagrangian cuts
  int partition_size = 0;
  int refinements = 0;
  std::string note;
};

struct RunTrace {
  std::string algorithm;
  std::string instance;
  int scenarios = 0;
  std::vector<TraceEvent> events;
  std::vector<Cut> cuts;
  Partition final_partition;
  std::string termination;  // converged, stalled, time_limit, ...
  double final_lb = -kInf;
  double final_ub = kInf;
  // Integer-restricted master value when final_mip_master was requested.
  std::optional<double> mip_master_lb;
  int lagrangian_rounds = 0;
  // Separation calls that ran out of inner evaluations without a verdict.
  int separation_budget_hits = 0;
  double wall_seconds = 0.0;

  bool timed_out() const { return termination == "time_limit"; }
};

RunTrace RunBenders(const Instance& instance, const RunConfig& config);
RunTrace RunBdd(const Instance& instance, const RunConfig& config);
RunTrace RunAlg1(const Instance& instance, const RunConfig& config);
RunTrace RunApblagc(const Instance& instance, const RunConfig& config);
// Dispatches on config.algorithm.
RunTrace Run(const Instance& instance, const RunConfig& config);

}  // namespace stochcuts
