#pragma once

// Weak-L^p quantities of step functions:
//
//   quasi-norm      ||phi||_{p,inf}  = sup_{t>0} t * mu({phi > t})^{1/p}
//   equivalent norm |||phi|||_{p,inf} = sup_{mu(E)>0} mu(E)^{1/p-1} * int_E phi
//
// with ||phi|| <= |||phi||| <= p/(p-1) * ||phi||. Both depend only on the
// decreasing rearrangement, and for step functions both sups are attained at
// level boundaries, so the computations are exact finite maxima.

#include <span>

#include "bellman_lab/partition.hpp"
#include "bellman_lab/rearrange.hpp"

namespace bellman_lab {

struct NormResult {
  double value = 0.0;
  /// Quasi-norm: the level t* whose left limit attains the sup.
  /// Equivalent norm: the prefix length s* of phi* attaining the sup.
  double witness = 0.0;
};

/// p / (p - 1).
double conjugate_exponent(double p);

/// max_i v_i * S_i^{1/p} with S_i = mu({phi >= v_i}).
NormResult quasi_norm(const Rearrangement& rearranged, double p);
NormResult quasi_norm(const StepFunction& phi, double p);

/// sup over prefixes s of s^{1/p-1} * int_0^s phi*. On a level the objective
/// s^{1/p-1}(A + v s) has a single critical point, which is a minimum, so the
/// sup is taken over level endpoints.
NormResult equiv_norm(const Rearrangement& rearranged, double p);
NormResult equiv_norm(const StepFunction& phi, double p);

/// Fast paths for equal-mass leaves already sorted in nonincreasing order.
double quasi_norm_sorted(std::span<const double> sorted_desc, double leaf_mass, double p);
double equiv_norm_sorted(std::span<const double> sorted_desc, double leaf_mass, double p);

struct NormComparison {
  double quasi = 0.0;
  double equiv = 0.0;
  double k = 0.0;
  double equiv_over_quasi = 0.0;    // in [1, k]
  double k_quasi_over_equiv = 0.0;  // in [1, k]
};

/// Computes both norms and checks quasi <= equiv <= k * quasi. Throws
/// InvariantViolation if the sandwich fails beyond rounding.
NormComparison norm_comparison_check(const StepFunction& phi, double p);

}  // namespace bellman_lab
