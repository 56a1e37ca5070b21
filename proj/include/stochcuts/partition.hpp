#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "stochcuts/mip.hpp"
#include "stochcuts/model.hpp"

namespace stochcuts {

// Exact set partition of the scenario indices {0, ..., n-1}. Clusters are
// kept sorted internally; their order is the order given at construction.
class Partition {
 public:
  Partition() = default;
  // Throws std::invalid_argument when the clusters are empty, overlap, or do
  // not cover every scenario.
  Partition(std::vector<std::vector<int>> clusters, int num_scenarios,
            int generation = 0);

  static Partition Whole(int num_scenarios);
  static Partition Singletons(int num_scenarios);

  const std::vector<std::vector<int>>& clusters() const { return clusters_; }
  int size() const { return static_cast<int>(clusters_.size()); }
  int num_scenarios() const { return num_scenarios_; }
  // Number of refine() calls that produced this partition.
  int generation() const { return generation_; }

  std::string ToString() const;

  bool operator==(const Partition& o) const {
    return clusters_ == o.clusters_ && num_scenarios_ == o.num_scenarios_;
  }

 private:
  std::vector<std::vector<int>> clusters_;
  int num_scenarios_ = 0;
  int generation_ = 0;
};

// Probability-weighted averages of the scenario data over a cluster.
struct AggregatedScenario {
  std::vector<int> cluster;
  double weight = 0.0;
  SparseMatrix technology;
  std::vector<double> rhs;
};

AggregatedScenario Aggregate(const Instance& instance,
                             std::span<const int> cluster);

// How dual vectors are scaled before their max-norm distance is compared
// against delta. Every mode is invariant to a common positive rescaling of
// all duals in a cluster except kRaw.
enum class DualScaling {
  kClusterMaxNorm,   // divide by the largest max-norm in the cluster
  kClusterMeanNorm,  // divide by the mean max-norm in the cluster
  kRaw,
};

const char* ToString(DualScaling scaling);

// Splits each cluster into groups whose scaled duals are pairwise within
// delta in max-norm (greedy first-fit in scenario-index order). The result is
// either a refinement of `partition` or the same clusters; the generation
// counter increments either way. Throws std::invalid_argument naming the
// first scenario without a dual vector, or on delta <= 0.
Partition Refine(const Partition& partition,
                 const std::map<int, std::vector<double>>& duals, double delta,
                 DualScaling scaling = DualScaling::kRaw);

// Refinement relation: every fine cluster lies inside a coarse cluster and
// the fine partition has strictly more clusters. Throws on a universe
// mismatch.
bool IsRefinement(const Partition& fine, const Partition& coarse);

// coefficient / n^2; throws std::invalid_argument for n < 1.
double DeltaSchedule(int n, double coefficient = 2.0);

// Aggregated problem over a partition. Variable order: x, then y^P per
// cluster in partition order.
MipModel BuildPartitionProblem(const Instance& instance,
                               const Partition& partition);

}  // namespace stochcuts
