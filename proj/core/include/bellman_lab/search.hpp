#pragma once

// The Bellman sups as constrained optimization over step functions: sample
// feasible phi (integral f, weak-norm constraint) to check that no sample
// beats the closed form, and run local search to approach it from below.
//
// Every trial draws from its own generator seeded by (seed, trial index), so
// results do not depend on the number of worker threads.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bellman_lab/bellman_forms.hpp"
#include "bellman_lab/partition.hpp"

namespace bellman_lab {

enum class Optimizer { random, coordinate_ascent, anneal };

enum class ConstraintMode {
  norm_le_F,        // |||phi||| <= F      (B)
  norm_eq_F_quasi,  // ||phi||   = F      (B1)
  norm_eq_F_equiv,  // |||phi||| = F      (B2)
};

std::string_view to_string(Optimizer optimizer);
std::string_view to_string(ConstraintMode mode);
Optimizer parse_optimizer(std::string_view name);
ConstraintMode default_mode(Functional functional);

struct SearchConfig {
  BellmanQuery query;
  int arity = 2;
  int depth = 10;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  Optimizer optimizer = Optimizer::coordinate_ascent;
  /// Defaults to the functional's own constraint.
  std::optional<ConstraintMode> mode;
  /// Local-search budget for maximize().
  std::uint64_t moves = 50000;
  /// 0: BELLMAN_LAB_THREADS, else hardware concurrency.
  unsigned threads = 0;

  ConstraintMode constraint() const { return mode.value_or(default_mode(query.functional)); }
  void validate() const;
};

/// Objective of the search: mu({M_T phi >= lambda}).
double search_objective(const StepFunction& phi, double lambda);

struct FeasibilityCheck {
  double integral = 0.0;
  double norm = 0.0;  // the norm the constraint mode restricts
  bool ok = false;
};

/// Integral within 1e-12 of f; the norm at most F (1 + 1e-12) and, for the
/// equality modes, at least F (1 - 1e-6).
FeasibilityCheck check_feasible(const StepFunction& phi, const SearchConfig& config);

/// Moves phi onto the constraint set while keeping its integral (see
/// sample_feasible). Returns nullopt if no projection was found.
std::optional<StepFunction> project_constraint(const StepFunction& phi, const SearchConfig& config);

/// Generator of one trial.
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);

/// A random feasible point. Shapes mix i.i.d. values, power-law profiles,
/// spikes and unions of tree nodes, placed by random tree automorphisms or
/// shuffles; the integral is rescaled to f and the constraint enforced by
/// mixing with the constant f (norm too large), raising the top leaf against
/// its node (equivalent norm too small), or clipping the rearrangement to
/// the envelope F t^{-1/p} (quasi-norm). Throws SamplingError when all
/// retries fail.
StepFunction sample_feasible(const SearchConfig& config, std::mt19937_64& rng);

struct TrialStats {
  std::uint64_t attempted = 0;
  std::uint64_t feasible = 0;
  std::uint64_t sampling_failures = 0;
  double mean_objective = 0.0;
  double min_objective = 0.0;
  double max_objective = 0.0;
  /// Largest ||M_T phi||_{p,inf} seen, and its sharp bound (F or kF).
  double max_maximal_norm = 0.0;
  double maximal_norm_bound = 0.0;
  std::uint64_t maximal_norm_violations = 0;
  std::uint64_t weak_type_checks = 0;
  std::uint64_t weak_type_violations = 0;
  std::uint64_t moves = 0;
  std::uint64_t accepted_moves = 0;
};

struct SearchReport {
  SearchConfig config;
  double best = 0.0;
  double target = 0.0;
  double gap = 0.0;  // target - best
  std::uint64_t violations = 0;
  StepFunction best_certificate;
  std::optional<StepFunction> violation_certificate;
  /// "random", "recipe" or "none": where maximize started.
  std::string seed_source = "random";
  /// Best objective after every 1000 moves (maximize only).
  std::vector<double> trace;
  TrialStats stats;
};

/// Samples `trials` feasible functions and counts objectives above
/// closed_form + 1e-12. Also tracks the weak type (1,1) inequality and the
/// bound on ||M_T phi||_{p,inf} for every sample.
SearchReport verify_upper_bound(const SearchConfig& config);

/// Starts from the best random sample and from the discretized extremal
/// recipe (when one exists for the branch) and runs projected pair moves.
/// DomainError for Optimizer::random.
SearchReport maximize(const SearchConfig& config);

/// Worker count: BELLMAN_LAB_THREADS when set, else hardware concurrency.
unsigned default_thread_count();

}  // namespace bellman_lab
