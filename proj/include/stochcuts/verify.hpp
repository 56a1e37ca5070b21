#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stochcuts/model.hpp"
#include "stochcuts/partition.hpp"

// Brute-force checkers. They recompute what they need from the instance with
// the LP/MIP cores and enumeration, independent of the cut engines (the one
// exception is the Lagrangian closure in CheckDim1NoGap and
// CheckThm1Strictness, which is what those checks measure).
namespace stochcuts {

struct VerificationReport {
  std::string check;
  std::string instance;
  bool pass = false;
  // Budget exhaustion kept the check from reaching a verdict.
  bool inconclusive = false;
  double worst_violation = 0.0;
  // Offending point or values; always set when the check fails.
  std::string witness;
  std::string note;
  // Check-specific numbers (bounds, chain values).
  std::vector<double> values;

  // One line: "PASS|FAIL|INCONCLUSIVE check=... instance=... worst=... ..."
  std::string ToText() const;
};

// Every cut at every feasible binary first-stage point x with
// theta^s = f^s(x). Throws std::invalid_argument if a first-stage variable is
// not binary or 2^p1 > 4096.
VerificationReport CheckCutValidity(const Instance& instance,
                                    const std::vector<Cut>& cuts,
                                    double tolerance = 1e-6);

// Builds the per-scenario Benders cuts from the dual that generated `pbbenc`
// (its origin is the cluster) and compares their probability-weighted
// combination coefficientwise (tolerance 1e-9). The weak-dominance facet
// evaluates the cut at the first-stage box corners with each theta^s at its
// scenario-cut minimum.
VerificationReport CheckPbbencDominance(const Instance& instance,
                                        const Cut& pbbenc,
                                        const std::vector<double>& dual);

// Saturated per-scenario Lagrangian bound vs the enumerated extensive
// optimum for one integer first-stage variable. Throws std::invalid_argument
// when n1 != 1 or the variable is continuous or unbounded.
VerificationReport CheckDim1NoGap(const Instance& instance);

// values = {Benders bound, B&D bound, single-cluster PbLagC bound, extensive
// optimum}. Without a partition the whole scenario set is one cluster. The
// no-argument form runs on the builtin "thm1".
VerificationReport CheckThm1Strictness(const Instance& instance,
                                       const Partition* partition = nullptr);
VerificationReport CheckThm1Strictness();

// Partition-problem optima along a coarse-to-fine chain. Throws
// std::invalid_argument("not a refinement chain") when some link is not a
// strict refinement.
VerificationReport CheckRefinementMonotone(const Instance& instance,
                                           const std::vector<Partition>& chain);

// Chain from the whole set down to singletons; each link splits one random
// cluster in two at a random cut of a shuffled order.
std::vector<Partition> RandomRefinementChain(int num_scenarios,
                                             std::uint64_t seed);

}  // namespace stochcuts
