#include "bellman_lab/bellman_forms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bellman_lab/errors.hpp"
#include "bellman_lab/tree_maximal.hpp"
#include "bellman_lab/weak_norms.hpp"

namespace bellman_lab {

std::string_view to_string(Functional functional) {
  switch (functional) {
    case Functional::B:
      return "B";
    case Functional::B1:
      return "B1";
    case Functional::B2:
      return "B2";
  }
  return "?";
}

std::string_view to_string(Branch branch) {
  switch (branch) {
    case Branch::one:
      return "one";
    case Branch::f_over_lambda:
      return "f_over_lambda";
    case Branch::power:
      return "power";
  }
  return "?";
}

Functional parse_functional(std::string_view name) {
  if (name == "B") return Functional::B;
  if (name == "B1") return Functional::B1;
  if (name == "B2") return Functional::B2;
  throw DomainError("unknown functional '" + std::string(name) + "' (expected B, B1 or B2)");
}

void BellmanQuery::validate() const {
  std::ostringstream msg;
  msg.precision(17);
  if (!(p > 1.0) || !std::isfinite(p)) {
    msg << "p must be > 1, got " << p;
  } else if (!(f > 0.0) || !std::isfinite(f)) {
    msg << "f must be > 0, got " << f;
  } else if (!(F > 0.0) || !std::isfinite(F)) {
    msg << "F must be > 0, got " << F;
  } else if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    msg << "lambda must be > 0, got " << lambda;
  } else if (functional != Functional::B1 && f > F) {
    msg << "constraint 0 < f <= F violated for " << to_string(functional) << ": f=" << f
        << " F=" << F;
  } else if (functional == Functional::B1 && f > k() * F) {
    msg << "constraint 0 < f <= (p/(p-1)) F violated for B1: f=" << f << " kF=" << k() * F;
  } else {
    return;
  }
  throw DomainError(msg.str());
}

ClosedForm closed_form(const BellmanQuery& query) {
  query.validate();
  const double p = query.p;
  const double f = query.f;
  const double F = query.F;
  const double lambda = query.lambda;
  ClosedForm out;
  out.threshold_low = f;
  if (query.functional == Functional::B1) {
    const double k = query.k();
    out.value = std::min({1.0, f / lambda, std::pow(k, p) * std::pow(F, p) / std::pow(lambda, p)});
    out.threshold_high = std::pow(std::pow(k, p) * std::pow(F, p) / f, 1.0 / (p - 1.0));
    out.branch = lambda < f                     ? Branch::one
                 : lambda < out.threshold_high ? Branch::f_over_lambda
                                               : Branch::power;
  } else {
    out.value = std::min({1.0, f / lambda, std::pow(F, p) / std::pow(lambda, p)});
    out.threshold_high = std::pow(std::pow(F, p) / f, 1.0 / (p - 1.0));
    out.branch = lambda <= f                     ? Branch::one
                 : lambda <= out.threshold_high ? Branch::f_over_lambda
                                                : Branch::power;
  }
  return out;
}

double corollary_norm_sup(double p, double f, double F, Functional functional) {
  BellmanQuery{p, f, F, 1.0, functional}.validate();
  return functional == Functional::B1 ? p / (p - 1.0) * F : F;
}

namespace {

struct Normalized {
  double p;
  double k;
  double f;       // f / F
  double lambda;  // lambda / F
};

Normalized normalize(const BellmanQuery& q) {
  return {q.p, q.k(), q.f / q.F, q.lambda / q.F};
}

// Snaps the flat-set measure to whole leaves and selects the nodes carrying it.
void place_flat_set(ExtremalRecipe& recipe, const TreePartition& tree) {
  const std::uint64_t quanta = snap_down_quanta(tree, recipe.flat_target);
  recipe.epsilon_d = tree.leaf_measure();
  if (quanta == 0) {
    std::ostringstream msg;
    msg << "flat set of measure " << recipe.flat_target
        << " is smaller than one leaf; increase the tree depth";
    throw DomainError(msg.str());
  }
  if (quanta >= tree.leaf_count()) {
    throw DomainError("flat set would cover the whole space");
  }
  recipe.flat_measure = static_cast<double>(quanta) / static_cast<double>(tree.denominator());
  recipe.snap_deficit = recipe.flat_target - recipe.flat_measure;
  recipe.flat_nodes =
      select_subfamily(tree, tree.root(),
                       1.0 - static_cast<double>(quanta) / static_cast<double>(tree.leaf_count()));
}

// Leaves outside the flat nodes, left to right.
std::vector<std::uint64_t> complement_leaves(const TreePartition& tree,
                                             const std::vector<NodeId>& nodes) {
  std::vector<char> taken(static_cast<std::size_t>(tree.leaf_count()), 0);
  for (const NodeId node : nodes) {
    const GridInterval run = tree.interval(node);
    std::fill(taken.begin() + static_cast<std::ptrdiff_t>(run.begin),
              taken.begin() + static_cast<std::ptrdiff_t>(run.end), 1);
  }
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 0; i < tree.leaf_count(); ++i) {
    if (!taken[static_cast<std::size_t>(i)]) out.push_back(i);
  }
  return out;
}

// Leaf values on one flat node: cell averages of phi* restricted to the
// node's piece, rearranged (pieces are ascending, phi* decreasing).
void fill_node_from_piece(const Rearrangement& rearranged, const RearrangedSubset& piece,
                          const GridInterval& run, double h, std::vector<double>& values) {
  std::vector<double> ends;
  double offset = 0.0;
  for (const auto& iv : piece.pieces) {
    offset += iv.length();
    ends.push_back(offset);
  }
  auto cumulative = [&](double x) {
    double total = 0.0;
    double start = 0.0;
    for (std::size_t i = 0; i < piece.pieces.size(); ++i) {
      const auto& iv = piece.pieces[i];
      if (x >= ends[i]) {
        total += rearranged.prefix_integral(iv.hi) - rearranged.prefix_integral(iv.lo);
      } else {
        if (x > start) {
          total += rearranged.prefix_integral(iv.lo + (x - start)) -
                   rearranged.prefix_integral(iv.lo);
        }
        break;
      }
      start = ends[i];
    }
    return total;
  };
  double previous = 0.0;
  const std::uint64_t count = run.size();
  for (std::uint64_t i = 0; i < count; ++i) {
    const double next = i + 1 == count ? piece.integral : cumulative(static_cast<double>(i + 1) * h);
    values[static_cast<std::size_t>(run.begin + i)] = std::max(0.0, (next - previous) / h);
    previous = next;
  }
}

// Splits the profile on [0, flat_measure] into equal-average pieces and lays
// them onto the flat nodes.
void fill_flat_nodes(ExtremalRecipe& recipe, const ContinuousProfile& profile,
                     const TreePartition& tree, std::vector<double>& values) {
  const double h = tree.leaf_measure();
  const auto quanta = static_cast<std::uint64_t>(std::llround(recipe.flat_measure / h));
  const std::vector<double> cells = profile.cell_averages(0.0, recipe.flat_measure, quanta);
  std::vector<Level> levels;
  levels.reserve(cells.size());
  for (const double v : cells) levels.push_back({v, h});
  const Rearrangement rearranged = Rearrangement::from_sorted_cells(levels);

  std::vector<double> masses;
  for (const NodeId node : recipe.flat_nodes) masses.push_back(tree.measure(node));
  recipe.pieces = partition_equal_average(rearranged, masses);
  for (std::size_t j = 0; j < recipe.flat_nodes.size(); ++j) {
    fill_node_from_piece(rearranged, recipe.pieces[j], tree.interval(recipe.flat_nodes[j]), h,
                         values);
  }
}

void finish(ExtremalRecipe& recipe, const TreePartition& tree, std::vector<double> values) {
  const double F = recipe.query.F;
  for (double& v : values) v *= F;
  recipe.scale = F;
  recipe.discretized = StepFunction(tree, std::move(values));

  const double p = recipe.query.p;
  recipe.continuous_metrics = {F * recipe.continuous.integral(), F * recipe.continuous.quasi_norm(),
                               F * recipe.continuous.equiv_norm(), recipe.flat_measure};
  const auto maximal = maximal_function(recipe.discretized);
  recipe.discrete_metrics = {
      integral(recipe.discretized), quasi_norm(recipe.discretized, p).value,
      equiv_norm(recipe.discretized, p).value,
      distribution_at(maximal, recipe.query.lambda * (1.0 - recipe.epsilon_d))};
}

}  // namespace

ExtremalRecipe extremal_B(const BellmanQuery& query, const TreePartition& tree) {
  query.validate();
  if (query.functional == Functional::B1) {
    throw DomainError("extremal_B builds B or B2 extremals; use extremal_B1_* for B1");
  }
  const ClosedForm form = closed_form(query);
  if (form.branch != Branch::power) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "extremal_B needs lambda > (F^p/f)^{1/(p-1)} = " << form.threshold_high
        << ", got lambda=" << query.lambda;
    throw DomainError(msg.str());
  }
  const Normalized n = normalize(query);
  ExtremalRecipe recipe;
  recipe.query = query;
  recipe.profile_tag = "flat_top_power";
  recipe.normalized_f = n.f;
  recipe.normalized_lambda = n.lambda;
  recipe.flat_target = std::pow(n.lambda, -n.p);
  place_flat_set(recipe, tree);

  const double c = recipe.flat_measure;
  const double level = std::pow(c, -1.0 / n.p);
  recipe.effective_lambda = level;
  recipe.parameter_name = "A";
  recipe.parameter = std::pow(n.f, n.p / (n.p - 1.0)) - c;
  if (recipe.parameter < 0.0) throw NumericError("extremal_B: negative profile length A");

  ContinuousProfile profile(n.p);
  profile.append_constant(c, level);
  profile.append_power(c + recipe.parameter, 1.0 - 1.0 / n.p);
  recipe.continuous = profile;

  std::vector<double> values(static_cast<std::size_t>(tree.leaf_count()), 0.0);
  for (const NodeId node : recipe.flat_nodes) {
    const GridInterval run = tree.interval(node);
    std::fill(values.begin() + static_cast<std::ptrdiff_t>(run.begin),
              values.begin() + static_cast<std::ptrdiff_t>(run.end), level);
  }
  const auto rest = complement_leaves(tree, recipe.flat_nodes);
  const auto cells = profile.cell_averages(c, 1.0, rest.size());
  for (std::size_t i = 0; i < rest.size(); ++i) values[static_cast<std::size_t>(rest[i])] = cells[i];
  finish(recipe, tree, std::move(values));
  return recipe;
}

ExtremalRecipe extremal_B1_power(const BellmanQuery& query, const TreePartition& tree) {
  query.validate();
  if (query.functional != Functional::B1) throw DomainError("extremal_B1_power needs functional B1");
  const ClosedForm form = closed_form(query);
  const Normalized n = normalize(query);
  if (form.branch != Branch::power || std::pow(n.k / n.lambda, n.p) >= 1.0) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "extremal_B1_power needs lambda >= (k^p F^p/f)^{1/(p-1)} = " << form.threshold_high
        << " and k^p F^p / lambda^p < 1, got lambda=" << query.lambda;
    throw DomainError(msg.str());
  }
  ExtremalRecipe recipe;
  recipe.query = query;
  recipe.profile_tag = "split_power";
  recipe.normalized_f = n.f;
  recipe.normalized_lambda = n.lambda;
  recipe.flat_target = std::pow(n.k / n.lambda, n.p);
  place_flat_set(recipe, tree);

  const double c = recipe.flat_measure;
  recipe.effective_lambda = n.k * std::pow(c, -1.0 / n.p);
  // int_0^{A1} (t + c)^{-1/p} dt = f - k c^{1-1/p}  <=>  A1 + c = (f/k)^{p/(p-1)}.
  recipe.parameter_name = "A1";
  recipe.parameter = std::pow(n.f / n.k, n.p / (n.p - 1.0)) - c;
  if (recipe.parameter < 0.0) throw NumericError("extremal_B1_power: negative profile length A1");

  ContinuousProfile profile(n.p);
  profile.append_power(c + recipe.parameter, 1.0);
  recipe.continuous = profile;

  std::vector<double> values(static_cast<std::size_t>(tree.leaf_count()), 0.0);
  ContinuousProfile head(n.p);
  head.append_power(c, 1.0);
  fill_flat_nodes(recipe, head, tree, values);
  const auto rest = complement_leaves(tree, recipe.flat_nodes);
  const auto cells = profile.cell_averages(c, 1.0, rest.size());
  for (std::size_t i = 0; i < rest.size(); ++i) values[static_cast<std::size_t>(rest[i])] = cells[i];
  finish(recipe, tree, std::move(values));
  return recipe;
}

ContinuousProfile convex_majorant(double p, double length, double mass, double* t0_out,
                                  double* floor_slope_out) {
  if (!(p > 1.0) || !(length > 0.0) || !(mass > 0.0)) {
    throw DomainError("convex_majorant needs p > 1, length > 0, mass > 0");
  }
  const double k = p / (p - 1.0);
  const double q = 1.0 - 1.0 / p;
  const double ceiling = k * std::pow(length, q);
  // The floor eta (length - t) carries at most a thousandth of the mass and
  // stays below t^{-1/p} on [0, length].
  const double eta = 2e-3 * mass / (length * length);
  if (!(mass < ceiling)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "convex majorant infeasible: mass " << mass
        << " must be below int_0^L t^{-1/p} dt = " << ceiling << " (L=" << length << ")";
    throw NumericError(msg.str());
  }
  if (eta * length > std::pow(length, -1.0 / p)) {
    throw NumericError("convex majorant infeasible: floor exceeds t^{-1/p}");
  }

  auto build = [&](double t0) {
    ContinuousProfile g(p);
    g.append_power(t0, 1.0);
    const double slope = -std::pow(t0, -1.0 / p - 1.0) / p;
    const double intercept = std::pow(t0, -1.0 / p) * (1.0 + 1.0 / p);
    // Tangent meets the floor where intercept + slope t = eta (length - t).
    double cross = length;
    if (slope + eta < 0.0) cross = std::clamp((eta * length - intercept) / (slope + eta), t0, length);
    g.append_linear(cross, intercept, slope);
    g.append_linear(length, eta * length, -eta);
    return g;
  };

  double lo = 0.0;
  double hi = length;
  for (int it = 0; it < 200 && hi > lo; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (build(mid).integral() < mass) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double t0 = hi;
  if (!(t0 > 0.0)) throw NumericError("convex majorant: t0 collapsed to zero");
  if (t0_out) *t0_out = t0;
  if (floor_slope_out) *floor_slope_out = eta;
  return build(t0);
}

ExtremalRecipe extremal_B1_middle(const BellmanQuery& query, const TreePartition& tree) {
  query.validate();
  if (query.functional != Functional::B1) throw DomainError("extremal_B1_middle needs functional B1");
  const ClosedForm form = closed_form(query);
  if (form.branch != Branch::f_over_lambda || query.lambda <= query.f) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "extremal_B1_middle needs f < lambda < (k^p F^p/f)^{1/(p-1)} = " << form.threshold_high
        << ", got lambda=" << query.lambda;
    throw DomainError(msg.str());
  }
  const Normalized n = normalize(query);
  ExtremalRecipe recipe;
  recipe.query = query;
  recipe.profile_tag = "convex_majorant";
  recipe.normalized_f = n.f;
  recipe.normalized_lambda = n.lambda;
  recipe.flat_target = n.f / n.lambda;
  place_flat_set(recipe, tree);

  const double c = recipe.flat_measure;
  recipe.effective_lambda = n.f / c;
  recipe.parameter_name = "t0";
  recipe.continuous = convex_majorant(n.p, c, n.f, &recipe.parameter, &recipe.floor_slope);

  std::vector<double> values(static_cast<std::size_t>(tree.leaf_count()), 0.0);
  fill_flat_nodes(recipe, recipe.continuous, tree, values);
  finish(recipe, tree, std::move(values));
  return recipe;
}

ExtremalRecipe extremal_for(const BellmanQuery& query, const TreePartition& tree) {
  const ClosedForm form = closed_form(query);
  if (query.functional == Functional::B1) {
    if (form.branch == Branch::power) return extremal_B1_power(query, tree);
    if (form.branch == Branch::f_over_lambda) return extremal_B1_middle(query, tree);
  } else if (form.branch == Branch::power) {
    return extremal_B(query, tree);
  }
  throw DomainError(std::string("no extremal construction for ") +
                    std::string(to_string(query.functional)) + " on the " +
                    std::string(to_string(form.branch)) + " branch");
}

}  // namespace bellman_lab
