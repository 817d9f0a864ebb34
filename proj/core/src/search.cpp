#include "bellman_lab/search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <thread>

#include "bellman_lab/errors.hpp"
#include "bellman_lab/rearrange.hpp"
#include "bellman_lab/tree_maximal.hpp"
#include "bellman_lab/weak_norms.hpp"

namespace bellman_lab {

std::string_view to_string(Optimizer optimizer) {
  switch (optimizer) {
    case Optimizer::random:
      return "random";
    case Optimizer::coordinate_ascent:
      return "coordinate_ascent";
    case Optimizer::anneal:
      return "anneal";
  }
  return "?";
}

std::string_view to_string(ConstraintMode mode) {
  switch (mode) {
    case ConstraintMode::norm_le_F:
      return "norm_le_F";
    case ConstraintMode::norm_eq_F_quasi:
      return "norm_eq_F_quasi";
    case ConstraintMode::norm_eq_F_equiv:
      return "norm_eq_F_equiv";
  }
  return "?";
}

Optimizer parse_optimizer(std::string_view name) {
  if (name == "random") return Optimizer::random;
  if (name == "coordinate_ascent") return Optimizer::coordinate_ascent;
  if (name == "anneal") return Optimizer::anneal;
  throw DomainError("unknown optimizer '" + std::string(name) +
                    "' (expected random, coordinate_ascent or anneal)");
}

ConstraintMode default_mode(Functional functional) {
  switch (functional) {
    case Functional::B:
      return ConstraintMode::norm_le_F;
    case Functional::B1:
      return ConstraintMode::norm_eq_F_quasi;
    case Functional::B2:
      return ConstraintMode::norm_eq_F_equiv;
  }
  return ConstraintMode::norm_le_F;
}

void SearchConfig::validate() const {
  query.validate();
  if (trials < 1) throw DomainError("trials must be >= 1");
  // Building the tree rejects bad shapes and oversized leaf counts.
  (void)TreePartition::build(arity, depth);
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("BELLMAN_LAB_THREADS")) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed > 0) return static_cast<unsigned>(parsed);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  // splitmix64 finalizer over (seed, trial).
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return std::mt19937_64(mix(seed ^ mix(trial)));
}

double search_objective(const StepFunction& phi, double lambda) {
  const auto maximal = maximal_values(phi.partition(), phi.values());
  return distribution_at(phi.partition(), maximal, lambda);
}

namespace {

constexpr double kEqualityTolerance = 1e-6;
constexpr double kUpperSlack = 1e-12;
constexpr double kBoundSlack = 1e-12;
constexpr int kSampleRetries = 16;

using Rng = std::mt19937_64;

double uniform(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
}

// Precomputed weights for norms of sorted equal-mass leaves.
struct Problem {
  TreePartition tree;
  double p;
  double f;
  double F;
  double lambda;
  ConstraintMode mode;
  double h;
  std::size_t n;
  std::vector<double> equiv_weight;  // ((i+1) h)^{1/p - 1} * h
  std::vector<double> quasi_weight;  // ((i+1) h)^{1/p}
  std::vector<double> envelope;      // F ((i+1) h)^{-1/p}
};

Problem make_problem(const SearchConfig& config) {
  Problem P{TreePartition::build(config.arity, config.depth),
            config.query.p,
            config.query.f,
            config.query.F,
            config.query.lambda,
            config.constraint(),
            0.0,
            0,
            {},
            {},
            {}};
  P.h = P.tree.leaf_measure();
  P.n = static_cast<std::size_t>(P.tree.leaf_count());
  P.equiv_weight.resize(P.n);
  P.quasi_weight.resize(P.n);
  P.envelope.resize(P.n);
  for (std::size_t i = 0; i < P.n; ++i) {
    const double s = static_cast<double>(i + 1) * P.h;
    P.equiv_weight[i] = std::pow(s, 1.0 / P.p - 1.0) * P.h;
    P.quasi_weight[i] = std::pow(s, 1.0 / P.p);
    P.envelope[i] = P.F / P.quasi_weight[i];
  }
  return P;
}

double equiv_sorted(const Problem& P, const std::vector<double>& sorted) {
  double best = 0.0;
  double prefix = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    prefix += sorted[i];
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    best = std::max(best, P.equiv_weight[i] * prefix);
  }
  return best;
}

double quasi_sorted(const Problem& P, const std::vector<double>& sorted) {
  double best = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] <= 0.0) break;
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    best = std::max(best, sorted[i] * P.quasi_weight[i]);
  }
  return best;
}

std::vector<double> sorted_desc(const std::vector<double>& values) {
  std::vector<double> out(values);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double mode_norm(const Problem& P, const std::vector<double>& values) {
  const auto sorted = sorted_desc(values);
  return P.mode == ConstraintMode::norm_eq_F_quasi ? quasi_sorted(P, sorted)
                                                   : equiv_sorted(P, sorted);
}

double leaf_integral(const Problem& P, const std::vector<double>& values) {
  return compensated_sum(values) * P.h;
}

bool rescale_integral(const Problem& P, std::vector<double>& values) {
  const double total = leaf_integral(P, values);
  if (!(total > 0.0)) return false;
  const double factor = P.f / total;
  for (double& v : values) v *= factor;
  return true;
}

// Smallest t with |||(1-t) phi + t f||| <= F. Mixing preserves the order of
// the leaves, so the norm is a max over prefixes of functions linear in t and
// each prefix gives a lower bound on t directly.
bool mix_down(const Problem& P, std::vector<double>& values, double extra = 0.0) {
  const auto sorted = sorted_desc(values);
  std::vector<double> tmp(sorted.size());
  auto norm_at = [&](double t) {
    for (std::size_t i = 0; i < sorted.size(); ++i) tmp[i] = (1.0 - t) * sorted[i] + t * P.f;
    return equiv_sorted(P, tmp);
  };
  double t = 0.0;
  double prefix = 0.0;
  const bool inside = equiv_sorted(P, sorted) <= P.F * (1.0 + kUpperSlack);
  for (std::size_t i = 0; !inside && i < sorted.size(); ++i) {
    prefix += sorted[i];
    const double at0 = P.equiv_weight[i] * prefix;
    if (at0 <= P.F) continue;
    const double at1 = P.equiv_weight[i] * static_cast<double>(i + 1) * P.f;
    if (at1 >= P.F) return false;
    t = std::max(t, (at0 - P.F) / (at0 - at1));
  }
  if (t > 0.0) {
    for (int nudge = 0; nudge < 64 && norm_at(t) > P.F; ++nudge) {
      t = std::min(1.0, t + (1.0 - t) * 1e-15 + 1e-16 * static_cast<double>(1 << std::min(nudge, 30)));
    }
    if (norm_at(t) > P.F) return false;
  }
  t += extra * (1.0 - t);
  if (t > 0.0) {
    for (double& v : values) v = (1.0 - t) * v + t * P.f;
  }
  return true;
}

// Raises the largest leaf and lowers the rest of its smallest sufficient
// ancestor proportionally, so every ancestor keeps its average, until
// |||phi||| reaches [F (1 - tol), F].
bool raise_top(const Problem& P, std::vector<double>& values) {
  const double low = P.F * (1.0 - kEqualityTolerance);
  auto in_window = [&](double e) { return e >= low && e <= P.F; };
  const double start = equiv_sorted(P, sorted_desc(values));
  if (in_window(start)) return true;
  if (start > P.F) return false;

  const auto top = static_cast<std::size_t>(
      std::max_element(values.begin(), values.end()) - values.begin());
  std::vector<double> inside;
  std::vector<double> outside;
  std::vector<double> merged(values.size());
  for (int level = P.tree.depth() - 1; level >= 0; --level) {
    const NodeId node = P.tree.ancestor_of_leaf(top, level);
    const GridInterval run = P.tree.interval(node);
    inside.clear();
    outside.clear();
    double others = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i == top) continue;
      if (i >= run.begin && i < run.end) {
        inside.push_back(values[i]);
        others += values[i];
      } else {
        outside.push_back(values[i]);
      }
    }
    if (!(others > 0.0)) continue;
    std::sort(inside.begin(), inside.end(), std::greater<>());
    std::sort(outside.begin(), outside.end(), std::greater<>());
    // The top leaf only grows, so it stays first; the rest is a merge.
    auto norm_at = [&](double delta) {
      const double keep = 1.0 - delta / others;
      merged[0] = values[top] + delta;
      std::size_t a = 0;
      std::size_t b = 0;
      std::size_t out = 1;
      while (a < inside.size() || b < outside.size()) {
        const double x = a < inside.size() ? inside[a] * keep : -1.0;
        const double y = b < outside.size() ? outside[b] : -1.0;
        if (x >= y) {
          merged[out++] = x;
          ++a;
        } else {
          merged[out++] = y;
          ++b;
        }
      }
      return equiv_sorted(P, merged);
    };
    auto apply = [&](double delta) {
      const double keep = 1.0 - delta / others;
      for (std::uint64_t i = run.begin; i < run.end; ++i) {
        if (i != top) values[static_cast<std::size_t>(i)] *= keep;
      }
      values[top] += delta;
    };
    const double at_max = norm_at(others);
    if (in_window(at_max)) {
      apply(others);
      return true;
    }
    if (at_max < low) continue;
    double lo = 0.0;
    double hi = others;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double e = norm_at(mid);
      if (in_window(e)) {
        apply(mid);
        return true;
      }
      if (e > P.F) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return false;
  }
  return false;
}

enum class Clip { ok, too_flat, too_thin };

// Clips nonincreasing values w to the envelope F s^{-1/p} after scaling by
// t, with t chosen so the integral is f. The mass is piecewise linear in t
// with a knot where each leaf meets the envelope. At the first knot one leaf
// touches the envelope; if the mass is already above f there the profile is
// too flat, and if clipping everything leaves it below f it is too thin.
Clip clip_sorted(const Problem& P, std::vector<double>& w) {
  if (w.empty() || !(w[0] > 0.0)) return Clip::too_thin;
  std::size_t support = 0;
  while (support < w.size() && w[support] > 0.0) ++support;
  const double target = P.f / P.h;
  double unclipped = 0.0;
  double first_knot = INFINITY;
  double envelope_mass = 0.0;
  for (std::size_t i = 0; i < support; ++i) {
    unclipped += w[i];
    envelope_mass += P.envelope[i];
    first_knot = std::min(first_knot, P.envelope[i] / w[i]);
  }
  if (first_knot * unclipped > target * (1.0 + 1e-13)) return Clip::too_flat;
  if (envelope_mass < target * (1.0 - 1e-13)) return Clip::too_thin;
  std::vector<std::pair<double, std::size_t>> knots(support);
  for (std::size_t i = 0; i < support; ++i) knots[i] = {P.envelope[i] / w[i], i};
  std::sort(knots.begin(), knots.end());
  double clipped = 0.0;
  double t = -1.0;
  for (std::size_t j = 0; j < support; ++j) {
    const double t_lo = knots[j].first;
    clipped += P.envelope[knots[j].second];
    unclipped -= w[knots[j].second];
    const double t_hi = j + 1 < support ? knots[j + 1].first : INFINITY;
    if (unclipped <= 0.0) {
      if (std::fabs(clipped - target) <= 1e-13 * target) t = t_lo;
      break;
    }
    const double candidate = (target - clipped) / unclipped;
    if (candidate <= t_hi) {
      t = std::max(candidate, t_lo);
      break;
    }
  }
  if (t < 0.0) return Clip::too_thin;
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::min(P.envelope[i], t * w[i]);
  return Clip::ok;
}

std::vector<std::size_t> descending_order(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  return order;
}

bool clip_to_envelope(const Problem& P, std::vector<double>& values) {
  const auto order = descending_order(values);
  std::vector<double> w(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) w[i] = values[order[i]];
  if (clip_sorted(P, w) != Clip::ok) return false;
  for (std::size_t i = 0; i < order.size(); ++i) values[order[i]] = w[i];
  return true;
}

// Clipping with monotone reshaping on failure: squaring sharpens a profile
// that is too flat, a square root plus a floor broadens one that is too thin.
// Both keep the leaf order, so one sort serves every attempt.
bool clip_with_reshape(const Problem& P, std::vector<double>& values) {
  const auto order = descending_order(values);
  std::vector<double> w(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) w[i] = values[order[i]];
  std::vector<double> c;
  for (int reshape = 0; reshape < 6; ++reshape) {
    const double total = compensated_sum(w) * P.h;
    if (!(total > 0.0)) return false;
    for (double& x : w) x *= P.f / total;
    c = w;
    const Clip outcome = clip_sorted(P, c);
    if (outcome == Clip::ok) {
      for (std::size_t i = 0; i < order.size(); ++i) values[order[i]] = c[i];
      return true;
    }
    const double top = w[0];
    if (outcome == Clip::too_flat) {
      for (double& x : w) x = x * x / top;
    } else {
      for (double& x : w) x = std::sqrt(x / top) * top + 1e-3 * top;
    }
  }
  return false;
}

bool project(const Problem& P, std::vector<double>& values) {
  switch (P.mode) {
    case ConstraintMode::norm_le_F:
      return mix_down(P, values);
    case ConstraintMode::norm_eq_F_equiv:
      return mix_down(P, values) && raise_top(P, values);
    case ConstraintMode::norm_eq_F_quasi:
      return clip_to_envelope(P, values);
  }
  return false;
}

bool feasible(const Problem& P, const std::vector<double>& values, double* norm_out = nullptr,
              double* integral_out = nullptr) {
  const double total = leaf_integral(P, values);
  const double norm = mode_norm(P, values);
  if (norm_out) *norm_out = norm;
  if (integral_out) *integral_out = total;
  if (std::fabs(total - P.f) > 1e-12 * std::max(1.0, P.f)) return false;
  if (norm > P.F * (1.0 + kUpperSlack)) return false;
  if (P.mode != ConstraintMode::norm_le_F && norm < P.F * (1.0 - kEqualityTolerance)) return false;
  return true;
}

// Leaf positions under a random automorphism of the tree (children of every
// node permuted independently).
std::vector<std::uint64_t> random_automorphism(const TreePartition& tree, Rng& rng) {
  const auto arity = static_cast<std::uint64_t>(tree.arity());
  std::vector<std::uint64_t> position{0};
  std::vector<std::uint64_t> perm(arity);
  for (int level = 1; level <= tree.depth(); ++level) {
    std::vector<std::uint64_t> next(static_cast<std::size_t>(tree.nodes_at(level)));
    for (std::size_t parent = 0; parent < position.size(); ++parent) {
      std::iota(perm.begin(), perm.end(), std::uint64_t{0});
      std::shuffle(perm.begin(), perm.end(), rng);
      for (std::uint64_t c = 0; c < arity; ++c) {
        next[parent * arity + c] = position[parent] * arity + perm[c];
      }
    }
    position = std::move(next);
  }
  return position;
}

std::vector<double> apply_positions(const std::vector<double>& values,
                                    const std::vector<std::uint64_t>& position) {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[position[i]] = values[i];
  return out;
}

std::vector<double> random_shape(const Problem& P, Rng& rng) {
  const std::size_t n = P.n;
  std::vector<double> v(n, 0.0);
  const auto shape = uniform_index(rng, 5);
  bool structured = false;
  switch (shape) {
    case 0: {  // i.i.d. exponential with random sparsity
      const double density = 0.02 + 0.98 * uniform(rng);
      for (auto& x : v) {
        if (uniform(rng) < density) x = -std::log1p(-uniform(rng));
      }
      break;
    }
    case 1: {  // power-law profile on a random support
      const double gamma = 1.5 * uniform(rng);
      const auto support = 1 + uniform_index(rng, n);
      for (std::size_t i = 0; i < support; ++i) v[i] = std::pow(static_cast<double>(i + 1), -gamma);
      break;
    }
    case 2: {  // a union of tree nodes of random measure
      const auto quanta = 1 + uniform_index(rng, n - 1);
      const double a = 1.0 - static_cast<double>(quanta) / static_cast<double>(n);
      const double background = uniform(rng) < 0.5 ? 0.0 : 0.2 * uniform(rng);
      std::fill(v.begin(), v.end(), background);
      for (const NodeId node : select_subfamily(P.tree, P.tree.root(), a)) {
        const GridInterval run = P.tree.interval(node);
        std::fill(v.begin() + static_cast<std::ptrdiff_t>(run.begin),
                  v.begin() + static_cast<std::ptrdiff_t>(run.end), 1.0);
      }
      structured = true;
      break;
    }
    case 3: {  // spikes on a background
      const double background = uniform(rng);
      std::fill(v.begin(), v.end(), background);
      const auto spikes = 1 + uniform_index(rng, 8);
      for (std::uint64_t s = 0; s < spikes; ++s) v[uniform_index(rng, n)] += std::exp(8.0 * uniform(rng));
      break;
    }
    default: {  // nested bumps on random nodes
      const auto bumps = 1 + uniform_index(rng, 6);
      for (std::uint64_t b = 0; b < bumps; ++b) {
        const int level = 1 + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(P.tree.depth())));
        const NodeId node{level, uniform_index(rng, P.tree.nodes_at(level))};
        const GridInterval run = P.tree.interval(node);
        const double height = std::exp(3.0 * uniform(rng));
        for (std::uint64_t i = run.begin; i < run.end; ++i) v[static_cast<std::size_t>(i)] += height;
      }
      structured = true;
      break;
    }
  }
  const double placement = uniform(rng);
  if (structured) {
    if (placement < 0.5) v = apply_positions(v, random_automorphism(P.tree, rng));
  } else if (placement < 0.4) {
    std::sort(v.begin(), v.end(), std::greater<>());
    v = apply_positions(v, random_automorphism(P.tree, rng));
  } else if (placement < 0.7) {
    std::shuffle(v.begin(), v.end(), rng);
  }
  return v;
}

std::optional<std::vector<double>> try_sample(const Problem& P, Rng& rng) {
  for (int attempt = 0; attempt < kSampleRetries; ++attempt) {
    std::vector<double> v = random_shape(P, rng);
    if (!rescale_integral(P, v)) continue;
    bool ok = false;
    if (P.mode == ConstraintMode::norm_eq_F_quasi) {
      ok = clip_with_reshape(P, v);
    } else {
      ok = mix_down(P, v, uniform(rng) < 0.3 ? 0.5 * uniform(rng) : 0.0);
      if (ok && P.mode == ConstraintMode::norm_eq_F_equiv) ok = raise_top(P, v);
    }
    if (ok && feasible(P, v)) return v;
  }
  return std::nullopt;
}

template <typename Fn>
void parallel_for(std::uint64_t count, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(count, 1024))));
  if (threads == 1) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::uint64_t i = t; i < count; i += threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

struct Outcome {
  bool feasible = false;
  double objective = 0.0;
  double maximal_norm = 0.0;
  bool weak_ok = true;
};

Outcome run_trial(const Problem& P, std::uint64_t seed, std::uint64_t trial,
                  std::vector<double>* keep = nullptr) {
  Outcome out;
  Rng rng = trial_rng(seed, trial);
  auto sample = try_sample(P, rng);
  if (!sample) return out;
  out.feasible = true;
  const auto maximal = maximal_values(P.tree, *sample);
  std::uint64_t count = 0;
  double inside = 0.0;
  for (std::size_t i = 0; i < maximal.size(); ++i) {
    if (maximal[i] >= P.lambda) {
      ++count;
      inside += (*sample)[i];
    }
  }
  out.objective = static_cast<double>(count) * P.h;
  out.weak_ok = out.objective <= inside * P.h / P.lambda * (1.0 + 1e-12) + 1e-15;
  out.maximal_norm = quasi_sorted(P, sorted_desc(maximal));
  if (keep) *keep = std::move(*sample);
  return out;
}

unsigned resolve_threads(const SearchConfig& config) {
  return config.threads > 0 ? config.threads : default_thread_count();
}

struct Batch {
  std::vector<Outcome> outcomes;
  TrialStats stats;
  std::optional<std::uint64_t> best_index;
  std::optional<std::uint64_t> first_violation;
  std::uint64_t violations = 0;
};

Batch run_batch(const Problem& P, const SearchConfig& config, double target) {
  Batch batch;
  batch.outcomes.resize(static_cast<std::size_t>(config.trials));
  parallel_for(config.trials, resolve_threads(config), [&](std::uint64_t i) {
    batch.outcomes[static_cast<std::size_t>(i)] = run_trial(P, config.seed, i);
  });
  auto& st = batch.stats;
  st.attempted = config.trials;
  st.maximal_norm_bound = corollary_norm_sup(P.p, P.f, P.F, config.query.functional);
  double sum = 0.0;
  bool first = true;
  for (std::uint64_t i = 0; i < config.trials; ++i) {
    const Outcome& o = batch.outcomes[static_cast<std::size_t>(i)];
    if (!o.feasible) {
      ++st.sampling_failures;
      continue;
    }
    ++st.feasible;
    sum += o.objective;
    if (first) {
      st.min_objective = st.max_objective = o.objective;
      first = false;
    }
    st.min_objective = std::min(st.min_objective, o.objective);
    if (!batch.best_index || o.objective > st.max_objective) batch.best_index = i;
    st.max_objective = std::max(st.max_objective, o.objective);
    st.max_maximal_norm = std::max(st.max_maximal_norm, o.maximal_norm);
    if (o.maximal_norm > st.maximal_norm_bound + 1e-9) ++st.maximal_norm_violations;
    ++st.weak_type_checks;
    if (!o.weak_ok) ++st.weak_type_violations;
    if (o.objective > target + kBoundSlack) {
      ++batch.violations;
      if (!batch.first_violation) batch.first_violation = i;
    }
  }
  st.mean_objective = st.feasible > 0 ? sum / static_cast<double>(st.feasible) : 0.0;
  return batch;
}

StepFunction regenerate(const Problem& P, std::uint64_t seed, std::uint64_t trial) {
  std::vector<double> values;
  run_trial(P, seed, trial, &values);
  return StepFunction(P.tree, std::move(values));
}

double objective_of(const Problem& P, const std::vector<double>& values) {
  const auto maximal = maximal_values(P.tree, values);
  return distribution_at(P.tree, maximal, P.lambda);
}

}  // namespace

FeasibilityCheck check_feasible(const StepFunction& phi, const SearchConfig& config) {
  SearchConfig adjusted = config;
  adjusted.arity = phi.partition().arity();
  adjusted.depth = phi.partition().depth();
  const Problem P = make_problem(adjusted);
  std::vector<double> values(phi.values().begin(), phi.values().end());
  FeasibilityCheck out;
  out.ok = feasible(P, values, &out.norm, &out.integral);
  return out;
}

std::optional<StepFunction> project_constraint(const StepFunction& phi, const SearchConfig& config) {
  SearchConfig adjusted = config;
  adjusted.arity = phi.partition().arity();
  adjusted.depth = phi.partition().depth();
  const Problem P = make_problem(adjusted);
  std::vector<double> values(phi.values().begin(), phi.values().end());
  if (!project(P, values) || !feasible(P, values)) return std::nullopt;
  return StepFunction(phi.partition(), std::move(values));
}

StepFunction sample_feasible(const SearchConfig& config, std::mt19937_64& rng) {
  config.validate();
  const Problem P = make_problem(config);
  auto sample = try_sample(P, rng);
  if (!sample) {
    throw SamplingError("no feasible sample for mode " + std::string(to_string(P.mode)) +
                        " within the retry budget");
  }
  return StepFunction(P.tree, std::move(*sample));
}

SearchReport verify_upper_bound(const SearchConfig& config) {
  config.validate();
  const Problem P = make_problem(config);
  SearchReport report;
  report.config = config;
  report.target = closed_form(config.query).value;
  Batch batch = run_batch(P, config, report.target);
  report.stats = batch.stats;
  report.violations = batch.violations;
  report.best = batch.stats.max_objective;
  report.gap = report.target - report.best;
  report.best_certificate =
      batch.best_index ? regenerate(P, config.seed, *batch.best_index) : StepFunction::zero(P.tree);
  if (batch.first_violation) {
    report.violation_certificate = regenerate(P, config.seed, *batch.first_violation);
  }
  return report;
}

SearchReport maximize(const SearchConfig& config) {
  config.validate();
  if (config.optimizer == Optimizer::random) {
    throw DomainError("maximize needs optimizer coordinate_ascent or anneal");
  }
  const Problem P = make_problem(config);
  SearchReport report;
  report.config = config;
  report.target = closed_form(config.query).value;

  Batch batch = run_batch(P, config, report.target);
  report.stats = batch.stats;
  report.violations = batch.violations;
  if (batch.first_violation) {
    report.violation_certificate = regenerate(P, config.seed, *batch.first_violation);
  }

  std::vector<double> current;
  double current_objective = -1.0;
  report.seed_source = "none";
  if (batch.best_index) {
    const StepFunction start = regenerate(P, config.seed, *batch.best_index);
    current.assign(start.values().begin(), start.values().end());
    current_objective = batch.stats.max_objective;
    report.seed_source = "random";
  }
  try {
    const ExtremalRecipe recipe = extremal_for(config.query, P.tree);
    std::vector<double> seeded(recipe.discretized.values().begin(),
                               recipe.discretized.values().end());
    if (project(P, seeded) && feasible(P, seeded)) {
      const double obj = objective_of(P, seeded);
      if (obj >= current_objective) {
        current = std::move(seeded);
        current_objective = obj;
        report.seed_source = "recipe";
      }
    }
  } catch (const DomainError&) {
  } catch (const NumericError&) {
  }

  if (current.empty()) {
    report.best_certificate = StepFunction::zero(P.tree);
    report.best = 0.0;
    report.gap = report.target;
    return report;
  }

  std::vector<double> best = current;
  double best_objective = current_objective;
  Rng rng = trial_rng(config.seed, config.trials);
  double temperature = report.target / 10.0;
  const int local_levels = std::min(4, P.tree.depth());
  std::vector<double> candidate;
  // Objectives are whole multiples of the leaf measure; nothing above the
  // largest multiple not exceeding the target can be feasible.
  const double ceiling =
      std::floor((report.target + kBoundSlack) / P.h) * P.h;
  for (std::uint64_t move = 0; move < config.moves; ++move) {
    if (best_objective >= ceiling) break;
    ++report.stats.moves;
    candidate = current;
    std::uint64_t i = uniform_index(rng, P.n);
    for (int tries = 0; tries < 8 && candidate[static_cast<std::size_t>(i)] <= 0.0; ++tries) {
      i = uniform_index(rng, P.n);
    }
    std::uint64_t j;
    if (uniform(rng) < 0.5) {
      j = uniform_index(rng, P.n);
    } else {
      const int level = P.tree.depth() - 1 - static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(local_levels)));
      const GridInterval run = P.tree.interval(P.tree.ancestor_of_leaf(i, std::max(0, level)));
      j = run.begin + uniform_index(rng, run.size());
    }
    const double amount = uniform(rng) * candidate[static_cast<std::size_t>(i)];
    const double accept_draw = uniform(rng);
    if (i != j && amount > 0.0) {
      candidate[static_cast<std::size_t>(i)] -= amount;
      candidate[static_cast<std::size_t>(j)] += amount;
      if (project(P, candidate) && feasible(P, candidate)) {
        const double obj = objective_of(P, candidate);
        bool accept = obj >= current_objective;
        if (!accept && config.optimizer == Optimizer::anneal && temperature > 0.0) {
          accept = accept_draw < std::exp((obj - current_objective) / temperature);
        }
        if (accept) {
          current.swap(candidate);
          current_objective = obj;
          ++report.stats.accepted_moves;
          if (current_objective > best_objective) {
            best_objective = current_objective;
            best = current;
          }
        }
      }
    }
    if ((move + 1) % 100 == 0) temperature *= 0.95;
    if ((move + 1) % 1000 == 0) report.trace.push_back(best_objective);
  }
  report.trace.push_back(best_objective);
  report.best = best_objective;
  report.gap = report.target - report.best;
  report.best_certificate = StepFunction(P.tree, std::move(best));
  return report;
}

}  // namespace bellman_lab
