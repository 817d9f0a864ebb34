#include "bellman_lab/profile.hpp"

#include <algorithm>
#include <cmath>

#include "bellman_lab/errors.hpp"

namespace bellman_lab {

ContinuousProfile::ContinuousProfile(double p) : p_(p) {
  if (!(p > 1.0)) throw DomainError("profile exponent p must be > 1");
}

void ContinuousProfile::append(Segment s) {
  s.lo = total_mass();
  if (!(s.hi >= s.lo)) throw DomainError("profile segments must have nonnegative length");
  if (s.hi == s.lo) return;
  const double start = segments_.empty() ? 0.0 : cum_.back() + segment_integral(segments_.back(), segments_.back().lo, segments_.back().hi);
  segments_.push_back(s);
  cum_.push_back(start);
}

void ContinuousProfile::append_constant(double hi, double value) {
  if (!(value >= 0.0)) throw DomainError("profile values must be >= 0");
  append({Kind::constant, 0.0, hi, value, 0.0});
}

void ContinuousProfile::append_power(double hi, double coefficient) {
  if (!(coefficient >= 0.0)) throw DomainError("power coefficient must be >= 0");
  append({Kind::power, 0.0, hi, coefficient, 0.0});
}

void ContinuousProfile::append_linear(double hi, double intercept, double slope) {
  append({Kind::linear, 0.0, hi, intercept, slope});
}

double ContinuousProfile::segment_value(const Segment& s, double u) const {
  switch (s.kind) {
    case Kind::constant:
      return s.a;
    case Kind::power:
      return u > 0.0 ? s.a * std::pow(u, -1.0 / p_) : INFINITY;
    case Kind::linear:
      return s.a + s.b * u;
  }
  return 0.0;
}

double ContinuousProfile::segment_integral(const Segment& s, double from, double to) const {
  switch (s.kind) {
    case Kind::constant:
      return s.a * (to - from);
    case Kind::power: {
      const double q = 1.0 - 1.0 / p_;
      return s.a / q * (std::pow(to, q) - std::pow(from, q));
    }
    case Kind::linear:
      return (to - from) * (s.a + 0.5 * s.b * (to + from));
  }
  return 0.0;
}

double ContinuousProfile::value(double u) const {
  if (segments_.empty() || u > total_mass()) return 0.0;
  for (const auto& s : segments_) {
    if (u <= s.hi) return segment_value(s, u);
  }
  return 0.0;
}

double ContinuousProfile::cumulative(double u) const {
  if (segments_.empty() || u <= 0.0) return 0.0;
  u = std::min(u, total_mass());
  const auto it = std::lower_bound(segments_.begin(), segments_.end(), u,
                                   [](const Segment& s, double x) { return s.hi < x; });
  const auto i = static_cast<std::size_t>(it - segments_.begin());
  return cum_[i] + segment_integral(segments_[i], segments_[i].lo, u);
}

double ContinuousProfile::distribution(double theta) const {
  for (const auto& s : segments_) {
    const double at_hi = segment_value(s, s.hi);
    if (at_hi > theta) continue;
    const double at_lo = segment_value(s, s.lo);
    if (!(at_lo > theta)) return s.lo;
    switch (s.kind) {
      case Kind::constant:
        return s.lo;
      case Kind::power:
        return std::clamp(std::pow(s.a / theta, p_), s.lo, s.hi);
      case Kind::linear:
        return std::clamp((theta - s.a) / s.b, s.lo, s.hi);
    }
  }
  return total_mass();
}

double ContinuousProfile::quasi_norm() const {
  const double inv_p = 1.0 / p_;
  double best = 0.0;
  for (const auto& s : segments_) {
    best = std::max(best, segment_value(s, s.hi) * std::pow(s.hi, inv_p));
    if (s.kind == Kind::linear && s.b < 0.0) {
      // d/du (a + b u) u^{1/p} = 0 at u = -a / (b (p + 1)).
      const double u = -s.a / (s.b * (p_ + 1.0));
      if (u > s.lo && u < s.hi) best = std::max(best, segment_value(s, u) * std::pow(u, inv_p));
    }
  }
  return best;
}

double ContinuousProfile::equiv_norm() const {
  const double exponent = 1.0 / p_ - 1.0;
  auto objective = [&](double s) { return std::pow(s, exponent) * cumulative(s); };
  double best = 0.0;
  for (const auto& s : segments_) {
    best = std::max(best, objective(s.hi));
    if (s.kind == Kind::power && s.lo == 0.0) {
      best = std::max(best, s.a * p_ / (p_ - 1.0));  // constant on a leading power piece
    }
    if (s.kind != Kind::linear) continue;
    // Constant and power pieces are monotone in the objective; linear pieces
    // are scanned and then refined by golden section.
    constexpr int kSamples = 256;
    const double width = s.hi - s.lo;
    double arg = s.hi;
    double top = objective(s.hi);
    for (int i = 1; i < kSamples; ++i) {
      const double u = s.lo + width * i / kSamples;
      const double v = objective(u);
      if (v > top) {
        top = v;
        arg = u;
      }
    }
    double a = std::max(s.lo, arg - width / kSamples);
    double b = std::min(s.hi, arg + width / kSamples);
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 100; ++it) {
      const double x1 = b - ratio * (b - a);
      const double x2 = a + ratio * (b - a);
      if (objective(x1) >= objective(x2)) {
        b = x2;
      } else {
        a = x1;
      }
    }
    best = std::max({best, top, objective(0.5 * (a + b))});
  }
  return best;
}

std::vector<double> ContinuousProfile::cell_averages(double from, double to,
                                                     std::uint64_t cells) const {
  std::vector<double> out(static_cast<std::size_t>(cells));
  if (cells == 0) return out;
  const double width = (to - from) / static_cast<double>(cells);
  double previous = cumulative(from);
  for (std::uint64_t i = 0; i < cells; ++i) {
    const double end = i + 1 == cells ? to : from + width * static_cast<double>(i + 1);
    const double next = cumulative(end);
    out[static_cast<std::size_t>(i)] = std::max(0.0, (next - previous) / width);
    previous = next;
  }
  return out;
}

}  // namespace bellman_lab
