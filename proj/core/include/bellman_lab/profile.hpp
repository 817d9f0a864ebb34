#pragma once

// Continuous nonincreasing profiles on [0, L] built from constant, power
// (c * u^{-1/p}) and linear pieces. They describe the extremal functions in
// rearranged form; all integrals use closed-form antiderivatives.

#include <cstdint>
#include <span>
#include <vector>

#include "bellman_lab/rearrange.hpp"

namespace bellman_lab {

class ContinuousProfile {
 public:
  enum class Kind { constant, power, linear };

  struct Segment {
    Kind kind = Kind::constant;
    double lo = 0.0;
    double hi = 0.0;
    double a = 0.0;  // the value or power coefficient; intercept when linear
    double b = 0.0;  // linear slope
  };

  explicit ContinuousProfile(double p);

  void append_constant(double hi, double value);
  void append_power(double hi, double coefficient);
  void append_linear(double hi, double intercept, double slope);

  double exponent() const { return p_; }
  double total_mass() const { return segments_.empty() ? 0.0 : segments_.back().hi; }
  std::span<const Segment> segments() const { return segments_; }

  /// Value at u (the left limit at segment ends).
  double value(double u) const;
  /// Integral over [0, u].
  double cumulative(double u) const;
  double integral(double from, double to) const { return cumulative(to) - cumulative(from); }
  double integral() const { return cumulative(total_mass()); }
  /// |{u : profile(u) > theta}|.
  double distribution(double theta) const;

  double quasi_norm() const;
  double equiv_norm() const;

  /// Averages over `cells` equal cells tiling [from, to], each a difference
  /// of the cumulative integral so the cells add up to integral(from, to).
  std::vector<double> cell_averages(double from, double to, std::uint64_t cells) const;

 private:
  double segment_value(const Segment& s, double u) const;
  double segment_integral(const Segment& s, double from, double to) const;
  void append(Segment s);

  double p_;
  std::vector<Segment> segments_;
  std::vector<double> cum_;  // integral up to each segment's lo
};

}  // namespace bellman_lab
