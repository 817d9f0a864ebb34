#include "bellman_lab/tree_maximal.hpp"

#include <algorithm>
#include <sstream>

#include "bellman_lab/errors.hpp"

namespace bellman_lab {

NodeSums::NodeSums(const TreePartition& tree, std::span<const double> leaf_values)
    : tree_(&tree), sums_(static_cast<std::size_t>(tree.depth()) + 1) {
  const auto arity = static_cast<std::size_t>(tree.arity());
  sums_.back().assign(leaf_values.begin(), leaf_values.end());
  for (int level = tree.depth() - 1; level >= 0; --level) {
    const auto& below = sums_[static_cast<std::size_t>(level) + 1];
    auto& here = sums_[static_cast<std::size_t>(level)];
    here.assign(static_cast<std::size_t>(tree.nodes_at(level)), 0.0);
    for (std::size_t i = 0; i < here.size(); ++i) {
      double s = 0.0;
      for (std::size_t c = 0; c < arity; ++c) s += below[i * arity + c];
      here[i] = s;
    }
  }
}

double NodeSums::average(NodeId node) const {
  return sum(node) / static_cast<double>(tree_->span(node.level));
}

namespace {

bool in_level_set(double value, double lambda, LevelSet mode) {
  return mode == LevelSet::at_least ? value >= lambda : value > lambda;
}

}  // namespace

MaximalResult maximal_function(const StepFunction& phi) {
  const auto& tree = phi.partition();
  const NodeSums sums(tree, phi.values());
  const auto arity = static_cast<std::uint64_t>(tree.arity());

  std::vector<double> best{sums.average(tree.root())};
  std::vector<NodeId> who{tree.root()};
  for (int level = 1; level <= tree.depth(); ++level) {
    const std::uint64_t count = tree.nodes_at(level);
    std::vector<double> next_best(static_cast<std::size_t>(count));
    std::vector<NodeId> next_who(static_cast<std::size_t>(count));
    for (std::uint64_t i = 0; i < count; ++i) {
      const double avg = sums.average({level, i});
      const double inherited = best[static_cast<std::size_t>(i / arity)];
      if (avg > inherited) {
        next_best[static_cast<std::size_t>(i)] = avg;
        next_who[static_cast<std::size_t>(i)] = {level, i};
      } else {
        next_best[static_cast<std::size_t>(i)] = inherited;
        next_who[static_cast<std::size_t>(i)] = who[static_cast<std::size_t>(i / arity)];
      }
    }
    best = std::move(next_best);
    who = std::move(next_who);
  }
  return {StepFunction(tree, std::move(best)), std::move(who)};
}

std::vector<double> maximal_values(const TreePartition& tree, std::span<const double> leaf_values) {
  const NodeSums sums(tree, leaf_values);
  const auto arity = static_cast<std::uint64_t>(tree.arity());
  std::vector<double> best{sums.average(tree.root())};
  std::vector<double> next;
  for (int level = 1; level <= tree.depth(); ++level) {
    const std::uint64_t count = tree.nodes_at(level);
    next.resize(static_cast<std::size_t>(count));
    for (std::uint64_t i = 0; i < count; ++i) {
      next[static_cast<std::size_t>(i)] =
          std::max(best[static_cast<std::size_t>(i / arity)], sums.average({level, i}));
    }
    std::swap(best, next);
  }
  return best;
}

double distribution_at(const TreePartition& tree, std::span<const double> maximal_leaf_values,
                       double lambda, LevelSet mode) {
  std::uint64_t count = 0;
  for (const double m : maximal_leaf_values) {
    if (in_level_set(m, lambda, mode)) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(tree.denominator());
}

double distribution_at(const MaximalResult& maximal, double lambda, LevelSet mode) {
  return distribution_at(maximal.values.partition(), maximal.values.values(), lambda, mode);
}

std::vector<NodeId> level_set_nodes(const StepFunction& phi, double lambda, LevelSet mode) {
  const auto& tree = phi.partition();
  const NodeSums sums(tree, phi.values());
  std::vector<NodeId> out;
  std::vector<NodeId> frontier{tree.root()};
  while (!frontier.empty()) {
    std::vector<NodeId> next;
    for (const NodeId node : frontier) {
      if (in_level_set(sums.average(node), lambda, mode)) {
        out.push_back(node);
      } else if (!tree.is_leaf(node)) {
        for (const NodeId child : tree.children(node)) next.push_back(child);
      }
    }
    frontier = std::move(next);
  }
  std::sort(out.begin(), out.end(), [&](NodeId a, NodeId b) {
    return tree.interval(a).begin < tree.interval(b).begin;
  });
  return out;
}

std::vector<DistributionPoint> distribution_curve(const MaximalResult& maximal) {
  std::vector<double> values(maximal.values.values().begin(), maximal.values.values().end());
  std::sort(values.begin(), values.end(), std::greater<>());
  const double h = maximal.values.partition().leaf_measure();
  std::vector<DistributionPoint> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= 0.0) break;
    if (i + 1 < values.size() && values[i + 1] == values[i]) continue;
    out.push_back({values[i], static_cast<double>(i + 1) * h});
  }
  std::reverse(out.begin(), out.end());
  return out;
}

WeakTypeReport weak_type_check(const StepFunction& phi, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("lambda must be > 0");
  const auto maximal = maximal_values(phi.partition(), phi.values());
  std::uint64_t count = 0;
  std::vector<double> inside;
  for (std::size_t i = 0; i < maximal.size(); ++i) {
    if (maximal[i] >= lambda) {
      ++count;
      inside.push_back(phi.value(i));
    }
  }
  const double denom = static_cast<double>(phi.partition().denominator());
  WeakTypeReport report{lambda, static_cast<double>(count) / denom,
                        compensated_sum(inside) / denom / lambda};
  if (report.measure > report.bound * (1.0 + 1e-12) + 1e-15) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "weak type (1,1) violated at lambda=" << lambda << ": measure " << report.measure
        << " > bound " << report.bound;
    throw InvariantViolation(msg.str());
  }
  return report;
}

}  // namespace bellman_lab
