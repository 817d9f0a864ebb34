#pragma once

// The bellman-lab command line. Subcommands: closed-form, extremal, norms,
// maximal, verify-bound, search, sweep.
//
// Exit codes: 0 success, 2 domain or resource error, 3 invariant violation,
// 64 usage error, 1 anything else (I/O, numeric failure).

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "bellman_lab/bellman_forms.hpp"

namespace bellman_lab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitInvariant = 3;
inline constexpr int kExitUsage = 64;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// start:stop:step, start included, stop excluded. DomainError when malformed
/// or empty.
std::vector<double> parse_lambda_grid(std::string_view spec);

/// 17 significant digits, '.' decimal point, independent of the global locale.
std::string format_real(double x);

struct SweepSettings {
  BellmanQuery query;  // lambda is overwritten per grid point
  int arity = 2;
  int depth = 12;
  std::uint64_t seed = 0;
  std::uint64_t search_trials = 200;
  std::uint64_t search_moves = 5000;
};

struct SweepRow {
  double lambda = 0.0;
  double closed_form = 0.0;
  double achieved = 0.0;  // NaN when no construction was available
  double gap = 0.0;
  std::string branch;
  std::string source;  // "any_feasible", "recipe", "search" or "none"
};

/// One row per grid point, in grid order.
std::vector<SweepRow> run_sweep(const SweepSettings& settings, const std::vector<double>& grid);

/// CSV text with columns lambda,closed_form,achieved,gap,branch,source.
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Writes closed_form.csv (lambda,closed_form) and achieved.csv
/// (lambda,achieved) into `dir`. DomainError for an empty sweep; nothing is
/// written in that case. Returns the written paths.
std::vector<std::filesystem::path> emit_plot_data(const std::vector<SweepRow>& rows,
                                                  const std::filesystem::path& dir);

}  // namespace bellman_lab::cli
