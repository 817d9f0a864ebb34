#pragma once

// Decreasing rearrangements of step functions, plus the selection steps the
// extremal constructions lean on. Subsets with the global average can be cut
// at any prescribed measure; tree nodes get picked to a given total measure.

#include <cstdint>
#include <span>
#include <vector>

#include "bellman_lab/partition.hpp"

namespace bellman_lab {

struct Level {
  double value = 0.0;
  double mass = 0.0;
};

/// phi* as (value, mass) pairs, strictly decreasing in value, on [0, total_mass].
class Rearrangement {
 public:
  Rearrangement() = default;

  /// Sorts by value (decreasing), merges equal values, drops zero masses.
  /// Throws DomainError on negative or non-finite data.
  static Rearrangement from_pairs(std::vector<Level> pairs);

  /// Cells already in nonincreasing value order, kept in that order so that
  /// the breakpoints of a discretized profile survive (equal neighbours merge).
  static Rearrangement from_sorted_cells(std::span<const Level> cells);

  std::span<const Level> levels() const { return levels_; }
  double total_mass() const { return cum_mass_.empty() ? 0.0 : cum_mass_.back(); }
  double integral() const { return cum_int_.empty() ? 0.0 : cum_int_.back(); }
  double average() const;

  /// Integral of phi* over [0, s]; s is clamped to [0, total_mass].
  double prefix_integral(double s) const;
  /// Integral of phi* over [r, r + beta].
  double window_integral(double r, double beta) const {
    return prefix_integral(r + beta) - prefix_integral(r);
  }
  /// Mass where phi* > t.
  double distribution(double t) const;
  /// Cumulative masses at the end of every level (last = total_mass).
  std::span<const double> breakpoints() const { return cum_mass_; }

 private:
  void rebuild_prefix();

  std::vector<Level> levels_;
  std::vector<double> cum_mass_;
  std::vector<double> cum_int_;
};

/// Rearrangement of phi restricted to `node`; total_mass = mu(node).
Rearrangement decreasing_rearrangement(const StepFunction& phi, NodeId node);

/// Offset r >= 0 with (1/beta) * integral of phi* over [r, r+beta] equal to
/// `target_average` (the average of phi* when omitted). Bisection to 1e-12 on
/// r (cap 200 steps), then an exact solve on the linear piece that brackets
/// the root. The smallest such r is returned.
double equal_average_offset(const Rearrangement& rearranged, double beta);
double equal_average_offset(const Rearrangement& rearranged, double beta,
                            double target_average);

struct LeafFraction {
  std::uint64_t leaf = 0;
  double fraction = 0.0;  // in [0, 1]
};

/// E_beta inside `source`, described by the fraction of each leaf it covers.
struct SubsetCertificate {
  NodeId source;
  double beta = 0.0;
  double offset = 0.0;          // r in rearranged coordinates
  double target_average = 0.0;  // Av_source(phi)
  double average = 0.0;         // achieved average over E_beta
  std::vector<LeafFraction> fractions;

  double measure(const TreePartition& tree) const;
};

/// Subset of `node` with measure beta and the same average as phi on `node`.
/// Throws DomainError if beta is not in (0, mu(node)].
SubsetCertificate equal_average_subset(const StepFunction& phi, NodeId node, double beta);

/// Pairwise disjoint nodes under `node` whose measures add up to exactly
/// (1 - a) * mu(node), chosen coarse to fine and left to right. The target
/// must be a whole number of leaves; otherwise DomainError lists the nearest
/// representable values.
std::vector<NodeId> select_subfamily(const TreePartition& tree, NodeId node, double a);

/// Largest whole number of leaf quanta whose measure does not exceed `target`.
std::uint64_t snap_down_quanta(const TreePartition& tree, double target);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

/// A piece A_j of [0, total_mass] in the coordinates of the source
/// rearrangement, as ascending disjoint intervals.
struct RearrangedSubset {
  double mass = 0.0;
  double integral = 0.0;
  std::vector<Interval> pieces;

  double average() const { return mass > 0.0 ? integral / mass : 0.0; }
};

/// Splits [0, total_mass] into disjoint pieces with the requested masses,
/// each carrying the global average of phi*. Pieces are extracted one at a
/// time from the remainder; the last piece is the whole remainder.
std::vector<RearrangedSubset> partition_equal_average(const Rearrangement& rearranged,
                                                      std::span<const double> masses);

/// Integral of phi* over a union of disjoint intervals.
double integral_over(const Rearrangement& rearranged, std::span<const Interval> pieces);

}  // namespace bellman_lab
