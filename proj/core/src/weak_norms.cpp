#include "bellman_lab/weak_norms.hpp"

#include <cmath>
#include <sstream>

#include "bellman_lab/errors.hpp"

namespace bellman_lab {

namespace {

void check_exponent(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    std::ostringstream msg;
    msg << "exponent p must be > 1, got " << p;
    throw DomainError(msg.str());
  }
}

}  // namespace

double conjugate_exponent(double p) {
  check_exponent(p);
  return p / (p - 1.0);
}

NormResult quasi_norm(const Rearrangement& rearranged, double p) {
  check_exponent(p);
  NormResult best;
  const auto levels = rearranged.levels();
  const auto ends = rearranged.breakpoints();
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i].value <= 0.0) break;
    const double candidate = levels[i].value * std::pow(ends[i], 1.0 / p);
    if (candidate > best.value) best = {candidate, levels[i].value};
  }
  return best;
}

NormResult quasi_norm(const StepFunction& phi, double p) {
  return quasi_norm(decreasing_rearrangement(phi, phi.partition().root()), p);
}

NormResult equiv_norm(const Rearrangement& rearranged, double p) {
  check_exponent(p);
  NormResult best;
  const auto ends = rearranged.breakpoints();
  const double exponent = 1.0 / p - 1.0;
  for (const double s : ends) {
    if (!(s > 0.0)) continue;
    const double candidate = std::pow(s, exponent) * rearranged.prefix_integral(s);
    if (candidate > best.value) best = {candidate, s};
  }
  return best;
}

NormResult equiv_norm(const StepFunction& phi, double p) {
  return equiv_norm(decreasing_rearrangement(phi, phi.partition().root()), p);
}

double quasi_norm_sorted(std::span<const double> sorted_desc, double leaf_mass, double p) {
  double best = 0.0;
  const double inv_p = 1.0 / p;
  for (std::size_t i = 0; i < sorted_desc.size(); ++i) {
    const double v = sorted_desc[i];
    if (v <= 0.0) break;
    // Inside a run of equal values the last index dominates.
    if (i + 1 < sorted_desc.size() && sorted_desc[i + 1] == v) continue;
    best = std::max(best, v * std::pow(static_cast<double>(i + 1) * leaf_mass, inv_p));
  }
  return best;
}

double equiv_norm_sorted(std::span<const double> sorted_desc, double leaf_mass, double p) {
  double best = 0.0;
  double prefix = 0.0;
  const double exponent = 1.0 / p - 1.0;
  for (std::size_t i = 0; i < sorted_desc.size(); ++i) {
    prefix += sorted_desc[i];
    if (i + 1 < sorted_desc.size() && sorted_desc[i + 1] == sorted_desc[i]) continue;
    const double s = static_cast<double>(i + 1) * leaf_mass;
    best = std::max(best, std::pow(s, exponent) * prefix * leaf_mass);
  }
  return best;
}

NormComparison norm_comparison_check(const StepFunction& phi, double p) {
  const Rearrangement rearranged = decreasing_rearrangement(phi, phi.partition().root());
  NormComparison out;
  out.k = conjugate_exponent(p);
  out.quasi = quasi_norm(rearranged, p).value;
  out.equiv = equiv_norm(rearranged, p).value;
  if (out.quasi == 0.0 && out.equiv == 0.0) {
    out.equiv_over_quasi = 1.0;
    out.k_quasi_over_equiv = out.k;
    return out;
  }
  out.equiv_over_quasi = out.equiv / out.quasi;
  out.k_quasi_over_equiv = out.k * out.quasi / out.equiv;
  constexpr double kSlack = 1e-12;
  if (out.equiv_over_quasi < 1.0 - kSlack || out.k_quasi_over_equiv < 1.0 - kSlack) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "norm sandwich violated: quasi=" << out.quasi << " equiv=" << out.equiv
        << " k=" << out.k;
    throw InvariantViolation(msg.str());
  }
  return out;
}

}  // namespace bellman_lab
