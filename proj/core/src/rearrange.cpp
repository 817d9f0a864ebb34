#include "bellman_lab/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "bellman_lab/errors.hpp"

namespace bellman_lab {

namespace {

constexpr double kOffsetTolerance = 1e-12;
constexpr int kBisectionCap = 200;

void check_level(const Level& level) {
  if (!std::isfinite(level.value) || level.value < 0.0) {
    throw DomainError("rearrangement values must be finite and >= 0");
  }
  if (!std::isfinite(level.mass) || level.mass < 0.0) {
    throw DomainError("rearrangement masses must be finite and >= 0");
  }
}

}  // namespace

Rearrangement Rearrangement::from_pairs(std::vector<Level> pairs) {
  for (const auto& level : pairs) check_level(level);
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Level& a, const Level& b) { return a.value > b.value; });
  return from_sorted_cells(pairs);
}

Rearrangement Rearrangement::from_sorted_cells(std::span<const Level> cells) {
  Rearrangement out;
  bool sorted = true;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    check_level(cells[i]);
    if (i > 0 && cells[i].value > cells[i - 1].value) sorted = false;
  }
  if (!sorted) return from_pairs(std::vector<Level>(cells.begin(), cells.end()));
  out.levels_.reserve(cells.size());
  for (const auto& cell : cells) {
    if (cell.mass == 0.0) continue;
    if (!out.levels_.empty() && out.levels_.back().value == cell.value) {
      out.levels_.back().mass += cell.mass;
    } else {
      out.levels_.push_back(cell);
    }
  }
  out.rebuild_prefix();
  return out;
}

void Rearrangement::rebuild_prefix() {
  cum_mass_.resize(levels_.size());
  cum_int_.resize(levels_.size());
  double mass = 0.0;
  double integral = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    mass += levels_[i].mass;
    // Kahan on the integral; masses are few distinct multiples of a quantum.
    const double y = levels_[i].value * levels_[i].mass - comp;
    const double t = integral + y;
    comp = (t - integral) - y;
    integral = t;
    cum_mass_[i] = mass;
    cum_int_[i] = integral;
  }
}

double Rearrangement::average() const {
  const double total = total_mass();
  return total > 0.0 ? integral() / total : 0.0;
}

double Rearrangement::prefix_integral(double s) const {
  if (levels_.empty() || s <= 0.0) return 0.0;
  if (s >= cum_mass_.back()) return cum_int_.back();
  const auto it = std::upper_bound(cum_mass_.begin(), cum_mass_.end(), s);
  const auto j = static_cast<std::size_t>(it - cum_mass_.begin());
  const double before_mass = j == 0 ? 0.0 : cum_mass_[j - 1];
  const double before_int = j == 0 ? 0.0 : cum_int_[j - 1];
  return before_int + levels_[j].value * (s - before_mass);
}

double Rearrangement::distribution(double t) const {
  const auto it = std::partition_point(levels_.begin(), levels_.end(),
                                       [t](const Level& l) { return l.value > t; });
  const auto n = static_cast<std::size_t>(it - levels_.begin());
  return n == 0 ? 0.0 : cum_mass_[n - 1];
}

Rearrangement decreasing_rearrangement(const StepFunction& phi, NodeId node) {
  const auto& tree = phi.partition();
  if (!tree.contains(node)) throw DomainError("node does not belong to the partition");
  const GridInterval run = tree.interval(node);
  std::vector<double> values(phi.values().begin() + static_cast<std::ptrdiff_t>(run.begin),
                             phi.values().begin() + static_cast<std::ptrdiff_t>(run.end));
  std::sort(values.begin(), values.end(), std::greater<>());
  std::vector<Level> cells;
  const double denom = static_cast<double>(tree.denominator());
  for (std::size_t i = 0; i < values.size();) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    cells.push_back({values[i], static_cast<double>(j - i) / denom});
    i = j;
  }
  return Rearrangement::from_sorted_cells(cells);
}

double equal_average_offset(const Rearrangement& rearranged, double beta) {
  return equal_average_offset(rearranged, beta, rearranged.average());
}

double equal_average_offset(const Rearrangement& rearranged, double beta,
                            double target_average) {
  const double total = rearranged.total_mass();
  if (!(beta > 0.0) || beta > total * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "subset measure beta=" << beta << " must lie in (0, " << total << "]";
    throw DomainError(msg.str());
  }
  beta = std::min(beta, total);
  const double span = total - beta;
  const double target = target_average * beta;
  const double slack = 1e-14 * std::max(std::fabs(target), 1e-300);
  auto window = [&](double r) { return rearranged.window_integral(r, beta); };

  if (span <= 0.0 || window(0.0) <= target + slack) return 0.0;
  if (window(span) > target + slack) {
    // The bottom window can only exceed the average through rounding.
    return span;
  }

  double lo = 0.0;
  double hi = span;
  const double tolerance = kOffsetTolerance * std::max(1.0, total);
  int steps = 0;
  while (hi - lo > tolerance) {
    if (++steps > kBisectionCap) {
      throw NumericError("equal-average offset bisection did not converge");
    }
    const double mid = 0.5 * (lo + hi);
    if (window(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  // The window integral is linear between breakpoints b and b - beta; finish
  // with an exact solve on the piece that brackets the root.
  std::vector<double> knots{lo, hi};
  for (const double b : rearranged.breakpoints()) {
    for (const double k : {b, b - beta}) {
      if (k > lo && k < hi) knots.push_back(k);
    }
  }
  std::sort(knots.begin(), knots.end());
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double a = knots[i];
    const double b = knots[i + 1];
    const double wa = window(a);
    const double wb = window(b);
    if (wa >= target && wb <= target) {
      if (wa == wb) return a;
      return std::clamp(a + (wa - target) * (b - a) / (wa - wb), a, b);
    }
  }
  return hi;
}

double SubsetCertificate::measure(const TreePartition& tree) const {
  double total = 0.0;
  for (const auto& lf : fractions) total += lf.fraction;
  return total / static_cast<double>(tree.denominator());
}

SubsetCertificate equal_average_subset(const StepFunction& phi, NodeId node, double beta) {
  const auto& tree = phi.partition();
  if (!tree.contains(node)) throw DomainError("node does not belong to the partition");
  const double mu = tree.measure(node);
  if (!(beta > 0.0) || beta > mu * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "subset measure beta=" << beta << " must lie in (0, mu(I)=" << mu << "]";
    throw DomainError(msg.str());
  }
  beta = std::min(beta, mu);
  const Rearrangement rearranged = decreasing_rearrangement(phi, node);
  const double s = node_average(phi, node);
  const double r = equal_average_offset(rearranged, beta, s);

  // Leaves in rearranged order: decreasing value, ties left to right.
  const GridInterval run = tree.interval(node);
  std::vector<std::uint64_t> order(run.size());
  std::iota(order.begin(), order.end(), run.begin);
  std::stable_sort(order.begin(), order.end(), [&](std::uint64_t a, std::uint64_t b) {
    return phi.value(a) > phi.value(b);
  });

  SubsetCertificate cert{node, beta, r, s, 0.0, {}};
  const double h = tree.leaf_measure();
  const double lo = r;
  const double hi = r + beta;
  double covered = 0.0;
  for (std::size_t j = 0; j < order.size(); ++j) {
    const double cell_lo = static_cast<double>(j) * h;
    const double cell_hi = static_cast<double>(j + 1) * h;
    const double overlap = std::min(hi, cell_hi) - std::max(lo, cell_lo);
    if (overlap <= 0.0) continue;
    const double fraction = std::min(1.0, overlap / h);
    cert.fractions.push_back({order[j], fraction});
    covered += fraction * phi.value(order[j]) * h;
  }
  cert.average = covered / beta;
  return cert;
}

std::uint64_t snap_down_quanta(const TreePartition& tree, double target) {
  if (!(target > 0.0)) return 0;
  const double scaled = target * static_cast<double>(tree.denominator());
  auto q = static_cast<std::uint64_t>(std::floor(scaled));
  if (static_cast<double>(q + 1) <= scaled * (1.0 + 1e-12)) ++q;
  return std::min(q, tree.denominator());
}

std::vector<NodeId> select_subfamily(const TreePartition& tree, NodeId node, double a) {
  if (!tree.contains(node)) throw DomainError("node does not belong to the partition");
  if (!(a > 0.0 && a < 1.0)) {
    throw DomainError("select_subfamily needs 0 < a < 1");
  }
  const std::uint64_t width = tree.span(node.level);
  const double wanted = (1.0 - a) * static_cast<double>(width);
  const double nearest = std::round(wanted);
  if (std::fabs(nearest - wanted) > 1e-9 * std::max(1.0, wanted) || nearest < 1.0 ||
      nearest >= static_cast<double>(width)) {
    const double h = tree.leaf_measure();
    const double below = std::floor(wanted) * h;
    const double above = std::ceil(wanted) * h;
    std::ostringstream msg;
    msg.precision(17);
    msg << "target measure " << wanted * h << " is not a whole number of leaves of measure "
        << h << "; nearest representable values are " << below << " and " << above;
    throw DomainError(msg.str());
  }

  auto remaining = static_cast<std::uint64_t>(nearest);
  std::uint64_t cursor = tree.interval(node).begin;
  std::vector<NodeId> out;
  for (int level = node.level + 1; level <= tree.depth() && remaining > 0; ++level) {
    const std::uint64_t size = tree.span(level);
    const std::uint64_t take = remaining / size;
    for (std::uint64_t i = 0; i < take; ++i) {
      out.push_back({level, cursor / size});
      cursor += size;
    }
    remaining -= take * size;
  }
  return out;
}

double integral_over(const Rearrangement& rearranged, std::span<const Interval> pieces) {
  double total = 0.0;
  for (const auto& piece : pieces) {
    total += rearranged.prefix_integral(piece.hi) - rearranged.prefix_integral(piece.lo);
  }
  return total;
}

namespace {

Rearrangement restrict_to(const Rearrangement& rearranged, std::span<const Interval> pieces) {
  std::vector<Level> cells;
  const auto levels = rearranged.levels();
  const auto ends = rearranged.breakpoints();
  for (const auto& piece : pieces) {
    auto j = static_cast<std::size_t>(
        std::upper_bound(ends.begin(), ends.end(), piece.lo) - ends.begin());
    double at = piece.lo;
    while (j < levels.size() && at < piece.hi) {
      const double stop = std::min(piece.hi, ends[j]);
      if (stop > at) cells.push_back({levels[j].value, stop - at});
      at = stop;
      ++j;
    }
  }
  return Rearrangement::from_sorted_cells(cells);
}

// Maps [lo, hi] in the concatenated coordinates of `pieces` back to source
// intervals.
std::vector<Interval> map_window(std::span<const Interval> pieces, double lo, double hi) {
  std::vector<Interval> out;
  double offset = 0.0;
  for (const auto& piece : pieces) {
    const double len = piece.length();
    const double a = std::max(lo, offset);
    const double b = std::min(hi, offset + len);
    if (b > a) out.push_back({piece.lo + (a - offset), piece.lo + (b - offset)});
    offset += len;
  }
  return out;
}

std::vector<Interval> subtract(std::span<const Interval> pieces, std::span<const Interval> cut) {
  std::vector<Interval> out;
  for (const auto& piece : pieces) {
    double at = piece.lo;
    for (const auto& c : cut) {
      if (c.hi <= piece.lo || c.lo >= piece.hi) continue;
      if (c.lo > at) out.push_back({at, c.lo});
      at = std::max(at, c.hi);
    }
    if (piece.hi > at) out.push_back({at, piece.hi});
  }
  return out;
}

}  // namespace

std::vector<RearrangedSubset> partition_equal_average(const Rearrangement& rearranged,
                                                      std::span<const double> masses) {
  const double total = rearranged.total_mass();
  if (masses.empty()) throw DomainError("partition_equal_average needs at least one mass");
  double requested = 0.0;
  for (const double m : masses) {
    if (!(m > 0.0)) throw DomainError("partition masses must be > 0");
    requested += m;
  }
  if (std::fabs(requested - total) > 1e-9 * std::max(1.0, total)) {
    std::ostringstream msg;
    msg << "partition masses sum to " << requested << " but the rearrangement has mass "
        << total;
    throw DomainError(msg.str());
  }

  const double s = rearranged.average();
  std::vector<Interval> remainder{{0.0, total}};
  std::vector<RearrangedSubset> out;
  out.reserve(masses.size());
  for (std::size_t j = 0; j < masses.size(); ++j) {
    RearrangedSubset piece;
    if (j + 1 == masses.size()) {
      piece.pieces = remainder;
    } else {
      const Rearrangement rest = restrict_to(rearranged, remainder);
      const double beta = std::min(masses[j], rest.total_mass());
      const double r = equal_average_offset(rest, beta, s);
      piece.pieces = map_window(remainder, r, r + beta);
      remainder = subtract(remainder, piece.pieces);
    }
    for (const auto& iv : piece.pieces) piece.mass += iv.length();
    piece.integral = integral_over(rearranged, piece.pieces);
    out.push_back(std::move(piece));
  }
  return out;
}

}  // namespace bellman_lab
