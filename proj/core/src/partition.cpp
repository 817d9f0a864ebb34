#include "bellman_lab/partition.hpp"

#include <cmath>
#include <string>

#include "bellman_lab/errors.hpp"

namespace bellman_lab {

TreePartition TreePartition::build(int arity, int depth, std::uint64_t leaf_budget) {
  if (arity < 2) {
    throw DomainError("tree arity must be >= 2, got " + std::to_string(arity));
  }
  if (depth < 1) {
    throw DomainError("tree depth must be >= 1, got " + std::to_string(depth));
  }
  std::vector<std::uint64_t> span(static_cast<std::size_t>(depth) + 1);
  span[static_cast<std::size_t>(depth)] = 1;
  for (int level = depth - 1; level >= 0; --level) {
    const std::uint64_t below = span[static_cast<std::size_t>(level) + 1];
    if (below > leaf_budget / static_cast<std::uint64_t>(arity)) {
      throw ResourceError("tree with arity " + std::to_string(arity) + " and depth " +
                          std::to_string(depth) + " exceeds the leaf budget of " +
                          std::to_string(leaf_budget));
    }
    span[static_cast<std::size_t>(level)] = below * static_cast<std::uint64_t>(arity);
  }
  return TreePartition(arity, depth, std::move(span));
}

std::uint64_t TreePartition::node_count() const {
  std::uint64_t total = 0;
  for (int level = 0; level <= depth_; ++level) total += nodes_at(level);
  return total;
}

bool TreePartition::contains(NodeId node) const {
  return node.level >= 0 && node.level <= depth_ && node.index < nodes_at(node.level);
}

GridInterval TreePartition::interval(NodeId node) const {
  const std::uint64_t width = span(node.level);
  return {node.index * width, (node.index + 1) * width};
}

double TreePartition::measure(NodeId node) const {
  return static_cast<double>(span(node.level)) / static_cast<double>(denominator());
}

std::vector<NodeId> TreePartition::children(NodeId node) const {
  std::vector<NodeId> out;
  if (is_leaf(node)) return out;
  out.reserve(static_cast<std::size_t>(arity_));
  const std::uint64_t first = node.index * static_cast<std::uint64_t>(arity_);
  for (int c = 0; c < arity_; ++c) {
    out.push_back({node.level + 1, first + static_cast<std::uint64_t>(c)});
  }
  return out;
}

NodeId TreePartition::parent(NodeId node) const {
  if (node.level == 0) throw DomainError("the root has no parent");
  return {node.level - 1, node.index / static_cast<std::uint64_t>(arity_)};
}

NodeId TreePartition::ancestor_of_leaf(std::uint64_t leaf, int level) const {
  return {level, leaf / span(level)};
}

std::vector<NodeId> TreePartition::nodes() const {
  std::vector<NodeId> out;
  out.reserve(static_cast<std::size_t>(node_count()));
  for (int level = 0; level <= depth_; ++level) {
    for (std::uint64_t i = 0; i < nodes_at(level); ++i) out.push_back({level, i});
  }
  return out;
}

StepFunction::StepFunction(TreePartition partition, std::vector<double> leaf_values)
    : partition_(std::move(partition)), values_(std::move(leaf_values)) {
  if (values_.size() != partition_.leaf_count()) {
    throw DomainError("step function needs " + std::to_string(partition_.leaf_count()) +
                      " leaf values, got " + std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] < 0.0) {
      throw DomainError("leaf value " + std::to_string(i) + " must be finite and >= 0");
    }
  }
}

StepFunction StepFunction::constant(const TreePartition& partition, double c) {
  return StepFunction(partition, std::vector<double>(partition.leaf_count(), c));
}

StepFunction StepFunction::scaled(double c) const {
  if (!(c >= 0.0)) throw DomainError("scale factor must be >= 0");
  std::vector<double> out(values_);
  for (double& v : out) v *= c;
  return StepFunction(partition_, std::move(out));
}

double compensated_sum(std::span<const double> xs) {
  double sum = 0.0;
  double comp = 0.0;
  for (const double x : xs) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

double integral(const StepFunction& phi) {
  return compensated_sum(phi.values()) / static_cast<double>(phi.partition().denominator());
}

double node_integral(const StepFunction& phi, NodeId node) {
  const auto& tree = phi.partition();
  if (!tree.contains(node)) throw DomainError("node does not belong to the partition");
  const GridInterval run = tree.interval(node);
  return compensated_sum(phi.values().subspan(run.begin, run.size())) /
         static_cast<double>(tree.denominator());
}

double node_average(const StepFunction& phi, NodeId node) {
  const auto& tree = phi.partition();
  if (!tree.contains(node)) throw DomainError("node does not belong to the partition");
  const GridInterval run = tree.interval(node);
  return compensated_sum(phi.values().subspan(run.begin, run.size())) /
         static_cast<double>(run.size());
}

StepFunction average_smooth(const StepFunction& phi, NodeId node) {
  const double avg = node_average(phi, node);
  const GridInterval run = phi.partition().interval(node);
  std::vector<double> out(phi.values().begin(), phi.values().end());
  for (std::uint64_t i = run.begin; i < run.end; ++i) out[i] = avg;
  return StepFunction(phi.partition(), std::move(out));
}

}  // namespace bellman_lab
