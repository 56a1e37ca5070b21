#include "stochcuts/partition.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace stochcuts {

Partition::Partition(std::vector<std::vector<int>> clusters, int num_scenarios,
                     int generation)
    : clusters_(std::move(clusters)),
      num_scenarios_(num_scenarios),
      generation_(generation) {
  std::vector<int> owner(num_scenarios, -1);
  for (std::size_t c = 0; c < clusters_.size(); ++c) {
    auto& cl = clusters_[c];
    if (cl.empty()) throw std::invalid_argument("partition has an empty cluster");
    std::sort(cl.begin(), cl.end());
    for (int s : cl) {
      if (s < 0 || s >= num_scenarios) {
        throw std::invalid_argument("scenario " + std::to_string(s) +
                                    " outside the universe");
      }
      if (owner[s] >= 0) {
        throw std::invalid_argument("scenario " + std::to_string(s) +
                                    " appears in two clusters");
      }
      owner[s] = static_cast<int>(c);
    }
  }
  for (int s = 0; s < num_scenarios; ++s) {
    if (owner[s] < 0) {
      throw std::invalid_argument("scenario " + std::to_string(s) +
                                  " not covered");
    }
  }
}

Partition Partition::Whole(int num_scenarios) {
  std::vector<int> all(num_scenarios);
  for (int s = 0; s < num_scenarios; ++s) all[s] = s;
  return Partition({all}, num_scenarios);
}

Partition Partition::Singletons(int num_scenarios) {
  std::vector<std::vector<int>> cl;
  for (int s = 0; s < num_scenarios; ++s) cl.push_back({s});
  return Partition(std::move(cl), num_scenarios);
}

std::string Partition::ToString() const {
  std::ostringstream os;
  os << "{";
  for (std::size_t c = 0; c < clusters_.size(); ++c) {
    if (c) os << ",";
    os << "{";
    for (std::size_t k = 0; k < clusters_[c].size(); ++k) {
      if (k) os << ",";
      os << clusters_[c][k];
    }
    os << "}";
  }
  os << "}";
  return os.str();
}

AggregatedScenario Aggregate(const Instance& instance,
                             std::span<const int> cluster) {
  if (cluster.empty()) throw std::invalid_argument("empty cluster");
  AggregatedScenario agg;
  agg.cluster.assign(cluster.begin(), cluster.end());
  std::sort(agg.cluster.begin(), agg.cluster.end());
  for (int s : agg.cluster) agg.weight += instance.scenarios.at(s).probability;

  const int m2 = instance.num_recourse_rows();
  agg.rhs.assign(m2, 0.0);
  std::vector<Triplet> triplets;
  for (int s : agg.cluster) {
    const Scenario& sc = instance.scenarios[s];
    const double w = sc.probability / agg.weight;
    for (const Triplet& t : sc.technology.entries()) {
      triplets.push_back({t.row, t.col, w * t.value});
    }
    for (int r = 0; r < m2; ++r) agg.rhs[r] += w * sc.rhs[r];
  }
  if (agg.cluster.size() == 1) {
    const Scenario& sc = instance.scenarios[agg.cluster[0]];
    agg.technology = sc.technology;
    agg.rhs = sc.rhs;
  } else {
    agg.technology = SparseMatrix::FromTriplets(m2, instance.num_first(),
                                                std::move(triplets));
  }
  return agg;
}

const char* ToString(DualScaling scaling) {
  switch (scaling) {
    case DualScaling::kClusterMaxNorm:
      return "cluster-max";
    case DualScaling::kClusterMeanNorm:
      return "cluster-mean";
    case DualScaling::kRaw:
      return "raw";
  }
  return "?";
}

namespace {

double MaxNorm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double MaxNormDistance(const std::vector<double>& a,
                       const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("dual vectors of different length");
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

}  // namespace

Partition Refine(const Partition& partition,
                 const std::map<int, std::vector<double>>& duals, double delta,
                 DualScaling scaling) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  for (int s = 0; s < partition.num_scenarios(); ++s) {
    if (!duals.contains(s)) {
      throw std::invalid_argument("missing dual vector for scenario " +
                                  std::to_string(s));
    }
  }
  std::vector<std::vector<int>> out;
  for (const auto& cluster : partition.clusters()) {
    double scale = 1.0;
    if (scaling != DualScaling::kRaw) {
      double largest = 0.0;
      double sum = 0.0;
      for (int s : cluster) {
        const double norm = MaxNorm(duals.at(s));
        largest = std::max(largest, norm);
        sum += norm;
      }
      const double mean = sum / static_cast<double>(cluster.size());
      scale = scaling == DualScaling::kClusterMaxNorm ? largest : mean;
      if (scale <= 0.0) scale = 1.0;
    }
    std::vector<std::vector<int>> groups;
    for (int s : cluster) {
      const auto& ds = duals.at(s);
      bool placed = false;
      for (auto& group : groups) {
        const bool fits = std::all_of(group.begin(), group.end(), [&](int t) {
          return MaxNormDistance(ds, duals.at(t)) / scale <= delta;
        });
        if (fits) {
          group.push_back(s);
          placed = true;
          break;
        }
      }
      if (!placed) groups.push_back({s});
    }
    for (auto& g : groups) out.push_back(std::move(g));
  }
  return Partition(std::move(out), partition.num_scenarios(),
                   partition.generation() + 1);
}

bool IsRefinement(const Partition& fine, const Partition& coarse) {
  if (fine.num_scenarios() != coarse.num_scenarios()) {
    throw std::invalid_argument("partitions over different scenario sets");
  }
  std::vector<int> owner(coarse.num_scenarios(), -1);
  for (int c = 0; c < coarse.size(); ++c) {
    for (int s : coarse.clusters()[c]) owner[s] = c;
  }
  for (const auto& cluster : fine.clusters()) {
    const int c = owner[cluster.front()];
    for (int s : cluster) {
      if (owner[s] != c) return false;
    }
  }
  return fine.size() > coarse.size();
}

double DeltaSchedule(int n, double coefficient) {
  if (n < 1) {
    throw std::invalid_argument("refinement count must be >= 1 (got " +
                                std::to_string(n) + ")");
  }
  return coefficient / (static_cast<double>(n) * n);
}

MipModel BuildPartitionProblem(const Instance& in, const Partition& partition) {
  if (partition.num_scenarios() != in.num_scenarios()) {
    throw std::invalid_argument("partition does not match the instance");
  }
  const int n1 = in.num_first();
  const int n2 = in.num_second();
  MipModel mip;
  LpModel& lp = mip.lp;
  for (int j = 0; j < n1; ++j) {
    lp.AddVariable(in.first_stage_cost[j], 0.0, in.FirstStageUpper(j));
    mip.integer.push_back(in.IsInteger(j));
  }
  std::vector<AggregatedScenario> aggs;
  for (const auto& cluster : partition.clusters()) {
    aggs.push_back(Aggregate(in, cluster));
    for (int k = 0; k < n2; ++k) {
      lp.AddVariable(aggs.back().weight * in.second_stage_cost[k], 0.0, kInf);
      mip.integer.push_back(false);
    }
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
  for (std::size_t c = 0; c < aggs.size(); ++c) {
    const int offset = n1 + static_cast<int>(c) * n2;
    for (int r = 0; r < in.num_recourse_rows(); ++r) {
      std::vector<int> idx;
      std::vector<double> val;
      for (const Triplet& t : aggs[c].technology.Row(r)) {
        idx.push_back(t.col);
        val.push_back(t.value);
      }
      for (const Triplet& t : in.recourse.Row(r)) {
        idx.push_back(offset + t.col);
        val.push_back(t.value);
      }
      lp.AddRow(idx, val, RowSense::kGreaterEqual, aggs[c].rhs[r]);
    }
  }
  return mip;
}

}  // namespace stochcuts
