#pragma once

// Closed forms of the three Bellman functions
//
//   B (f,F,lambda) = sup mu({M phi >= lambda}) over int phi = f, |||phi||| <= F
//   B1(f,F,lambda) = same with ||phi|| = F
//   B2(f,F,lambda) = same with |||phi||| = F
//
// and the extremal functions that attain them, discretized onto a tree.
//
// Extremal constructions are built for F = 1 (the functionals are
// 1-homogeneous) at the normalized level lambda / F and scaled by F at the
// end. The set carrying the flat level must be a union of tree nodes, so its
// measure is snapped down to a whole number of leaves; the profile is then
// built exactly for the slightly larger effective level whose flat-set
// measure is the snapped one.

#include <string>
#include <string_view>
#include <vector>

#include "bellman_lab/partition.hpp"
#include "bellman_lab/profile.hpp"
#include "bellman_lab/rearrange.hpp"

namespace bellman_lab {

enum class Functional { B, B1, B2 };
enum class Branch { one, f_over_lambda, power };

std::string_view to_string(Functional functional);
std::string_view to_string(Branch branch);
/// Throws DomainError for unknown names.
Functional parse_functional(std::string_view name);

struct BellmanQuery {
  double p = 2.0;
  double f = 0.0;
  double F = 1.0;
  double lambda = 1.0;
  Functional functional = Functional::B;

  /// p / (p - 1).
  double k() const { return p / (p - 1.0); }
  /// Throws DomainError naming the violated constraint.
  void validate() const;
};

struct ClosedForm {
  double value = 0.0;
  Branch branch = Branch::one;
  double threshold_low = 0.0;   // lambda = f
  double threshold_high = 0.0;  // lambda = (F^p/f)^{1/(p-1)}, or with k^p F^p for B1
};

/// min(1, f/lambda, F^p/lambda^p) for B and B2; min(1, f/lambda, k^p F^p/lambda^p) for B1.
ClosedForm closed_form(const BellmanQuery& query);

/// sup ||M phi||_{p,inf}: F for B and B2, k*F for B1.
double corollary_norm_sup(double p, double f, double F, Functional functional);

struct AchievedMetrics {
  double integral = 0.0;
  double quasi_norm = 0.0;
  double equiv_norm = 0.0;
  /// Discrete: mu({M phi >= lambda (1 - epsilon_d)}). Continuous: measure of
  /// the node union whose averages are at least the effective level.
  double distribution = 0.0;
};

struct ExtremalRecipe {
  BellmanQuery query;
  /// "flat_top_power", "split_power" or "convex_majorant".
  std::string profile_tag;

  // Everything below up to `discretized` is in normalized (F = 1) units.
  double normalized_f = 0.0;
  double normalized_lambda = 0.0;
  double effective_lambda = 0.0;  // >= normalized_lambda
  /// Rearranged profile of the whole continuous extremal function.
  ContinuousProfile continuous{2.0};
  /// Name and value of the profile parameter: "A", "A1" or "t0".
  std::string parameter_name;
  double parameter = 0.0;
  /// Linear floor slope of the convex majorant construction (0 otherwise).
  double floor_slope = 0.0;

  double flat_target = 0.0;   // closed-form measure of the flat set
  double flat_measure = 0.0;  // snapped, = sum of mu(flat_nodes)
  double snap_deficit = 0.0;
  double epsilon_d = 0.0;     // arity^-depth
  std::vector<NodeId> flat_nodes;
  /// Pieces A_j of the power/majorant profile assigned to each flat node.
  std::vector<RearrangedSubset> pieces;

  double scale = 1.0;  // F
  StepFunction discretized;
  AchievedMetrics continuous_metrics;  // at scale F
  AchievedMetrics discrete_metrics;
};

/// B power branch: lambda on a node union of measure lambda^-p, then
/// (1 - 1/p)(t + lambda^-p)^{-1/p} up to A = f^{p/(p-1)} - lambda^-p.
ExtremalRecipe extremal_B(const BellmanQuery& query, const TreePartition& tree);

/// B1 power branch: pieces of t^{-1/p} with average lambda on nodes of total
/// measure (k/lambda)^p, and (t + (k/lambda)^p)^{-1/p} up to A1 elsewhere.
ExtremalRecipe extremal_B1_power(const BellmanQuery& query, const TreePartition& tree);

/// B1 middle branch: a convex majorant G <= t^{-1/p} on [0, f/lambda] with
/// integral f, split into pieces of average lambda over nodes of total
/// measure f/lambda.
ExtremalRecipe extremal_B1_middle(const BellmanQuery& query, const TreePartition& tree);

/// The construction matching the query's branch; DomainError when none
/// applies (B and B2 below the power threshold).
ExtremalRecipe extremal_for(const BellmanQuery& query, const TreePartition& tree);

/// The function G of the middle-branch construction on [0, length] for
/// exponent p with integral `mass`: t^{-1/p} up to t0, then the larger of the
/// tangent at t0 and a small linear floor vanishing at `length`. Throws
/// NumericError when mass is not in the attainable range.
ContinuousProfile convex_majorant(double p, double length, double mass, double* t0_out = nullptr,
                                  double* floor_slope_out = nullptr);

}  // namespace bellman_lab
