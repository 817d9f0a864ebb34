#pragma once

// The maximal operator of a tree,
//
//   M_T phi(x) = sup { Av_I(phi) : x in I, I a node },
//
// which is constant on leaves, and its distribution function.

#include <span>
#include <vector>

#include "bellman_lab/partition.hpp"

namespace bellman_lab {

/// Which level set the distribution function measures.
enum class LevelSet {
  at_least,        // {M phi >= lambda}
  strictly_above,  // {M phi > lambda}
};

struct MaximalResult {
  StepFunction values;
  /// Per leaf, the coarsest node attaining the sup.
  std::vector<NodeId> argmax;
};

/// Per-level node sums of a leaf vector, built bottom-up.
class NodeSums {
 public:
  NodeSums(const TreePartition& tree, std::span<const double> leaf_values);

  double sum(NodeId node) const { return sums_[static_cast<std::size_t>(node.level)][node.index]; }
  double average(NodeId node) const;

 private:
  const TreePartition* tree_;
  std::vector<std::vector<double>> sums_;
};

/// One top-down pass carrying the running max of ancestor averages.
MaximalResult maximal_function(const StepFunction& phi);

/// M_T phi on raw leaf values (no argmax); for inner loops.
std::vector<double> maximal_values(const TreePartition& tree, std::span<const double> leaf_values);

double distribution_at(const MaximalResult& maximal, double lambda,
                       LevelSet mode = LevelSet::at_least);
/// Same, straight from leaf values of M_T phi.
double distribution_at(const TreePartition& tree, std::span<const double> maximal_leaf_values,
                       double lambda, LevelSet mode = LevelSet::at_least);

/// Maximal nodes J (no ancestor qualifies) with Av_J(phi) >= lambda (or >).
/// Their union is exactly the level set of M_T phi.
std::vector<NodeId> level_set_nodes(const StepFunction& phi, double lambda,
                                    LevelSet mode = LevelSet::at_least);

struct DistributionPoint {
  double lambda = 0.0;
  double measure = 0.0;
};

/// lambda -> mu({M >= lambda}) at every distinct positive value of M, in
/// increasing lambda.
std::vector<DistributionPoint> distribution_curve(const MaximalResult& maximal);

struct WeakTypeReport {
  double lambda = 0.0;
  double measure = 0.0;  // mu({M >= lambda})
  double bound = 0.0;    // (1/lambda) * integral of phi over that set
};

/// Checks mu({M phi >= lambda}) <= (1/lambda) int_{M phi >= lambda} phi.
/// Throws InvariantViolation if it fails beyond rounding.
WeakTypeReport weak_type_check(const StepFunction& phi, double lambda);

}  // namespace bellman_lab
