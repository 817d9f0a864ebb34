#pragma once

// Finite uniform-arity tree partitions of [0,1] with Lebesgue measure, and
// nonnegative step functions constant on the leaves.
//
// A tree of arity a and depth d has a^d leaves of equal measure a^-d. Every
// node is a contiguous run of leaves, so its endpoints are exact rationals
// with denominator a^d; they are stored as integer leaf offsets ("quanta").
// The model truncates at `depth`: the shrinking-cell condition of a tree only
// holds for the family of trees as depth grows.

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace bellman_lab {

struct NodeId {
  int level = 0;             // 0 is the root, depth() is the leaf level
  std::uint64_t index = 0;   // left-to-right position within the level

  auto operator<=>(const NodeId&) const = default;
};

/// Half-open run of leaves [begin, end); also the node's interval in units of
/// the leaf measure.
struct GridInterval {
  std::uint64_t begin = 0;
  std::uint64_t end = 0;

  std::uint64_t size() const { return end - begin; }
  auto operator<=>(const GridInterval&) const = default;
};

class TreePartition {
 public:
  static constexpr std::uint64_t kDefaultLeafBudget = std::uint64_t{1} << 22;

  /// The two-leaf tree (arity 2, depth 1).
  TreePartition() : arity_(2), depth_(1), span_{2, 1} {}

  /// Throws DomainError for arity < 2 or depth < 1 and ResourceError when
  /// arity^depth exceeds `leaf_budget`.
  static TreePartition build(int arity, int depth,
                             std::uint64_t leaf_budget = kDefaultLeafBudget);

  int arity() const { return arity_; }
  int depth() const { return depth_; }
  std::uint64_t leaf_count() const { return span_[0]; }
  /// Common denominator of all node endpoints (= leaf_count()).
  std::uint64_t denominator() const { return span_[0]; }
  double leaf_measure() const { return 1.0 / static_cast<double>(span_[0]); }

  /// Leaves under one node at `level`.
  std::uint64_t span(int level) const { return span_[static_cast<std::size_t>(level)]; }
  std::uint64_t nodes_at(int level) const { return span_[static_cast<std::size_t>(depth_ - level)]; }
  std::uint64_t node_count() const;

  NodeId root() const { return {0, 0}; }
  NodeId leaf(std::uint64_t i) const { return {depth_, i}; }
  bool contains(NodeId node) const;
  bool is_leaf(NodeId node) const { return node.level == depth_; }

  GridInterval interval(NodeId node) const;
  /// mu(node) = interval size / denominator.
  double measure(NodeId node) const;
  std::vector<NodeId> children(NodeId node) const;
  NodeId parent(NodeId node) const;
  NodeId ancestor_of_leaf(std::uint64_t leaf, int level) const;

  /// All nodes, level by level.
  std::vector<NodeId> nodes() const;

  bool operator==(const TreePartition& other) const {
    return arity_ == other.arity_ && depth_ == other.depth_;
  }

 private:
  TreePartition(int arity, int depth, std::vector<std::uint64_t> span)
      : arity_(arity), depth_(depth), span_(std::move(span)) {}

  int arity_;
  int depth_;
  std::vector<std::uint64_t> span_;  // span_[l] = arity^(depth - l)
};

/// A nonnegative function constant on the leaves of a TreePartition. Values
/// are in left-to-right leaf order.
class StepFunction {
 public:
  /// Throws DomainError if the value count does not match the leaf count or
  /// any value is negative or non-finite.
  StepFunction(TreePartition partition, std::vector<double> leaf_values);
  /// Zero on the two-leaf tree.
  StepFunction() : values_(2, 0.0) {}

  static StepFunction constant(const TreePartition& partition, double c);
  static StepFunction zero(const TreePartition& partition) { return constant(partition, 0.0); }

  const TreePartition& partition() const { return partition_; }
  std::span<const double> values() const { return values_; }
  double value(std::uint64_t leaf) const { return values_[leaf]; }
  std::size_t size() const { return values_.size(); }

  /// Returns c * phi (c >= 0).
  StepFunction scaled(double c) const;

  bool operator==(const StepFunction& other) const {
    return partition_ == other.partition_ && values_ == other.values_;
  }

 private:
  TreePartition partition_;
  std::vector<double> values_;
};

/// Sum of value * leaf measure, with compensated summation.
double integral(const StepFunction& phi);
/// Integral of phi over a node.
double node_integral(const StepFunction& phi, NodeId node);
/// Av_I(phi) = (1/mu(I)) * integral over I.
double node_average(const StepFunction& phi, NodeId node);
/// phi with every leaf under `node` replaced by Av_node(phi).
StepFunction average_smooth(const StepFunction& phi, NodeId node);

/// Neumaier-compensated sum.
double compensated_sum(std::span<const double> xs);

}  // namespace bellman_lab
