#include "doctest.h"

#include <numeric>

#include "bellman_lab/errors.hpp"
#include "bellman_lab/rearrange.hpp"
#include "../oracles.hpp"

using namespace bellman_lab;

namespace {

double leaf_fraction_average(const StepFunction& phi, const SubsetCertificate& cert) {
  const double h = phi.partition().leaf_measure();
  double mass = 0.0;
  double mass_integral = 0.0;
  for (const auto& lf : cert.fractions) {
    CHECK(lf.fraction >= 0.0);
    CHECK(lf.fraction <= 1.0);
    mass += lf.fraction * h;
    mass_integral += lf.fraction * h * phi.value(lf.leaf);
  }
  CHECK(mass == doctest::Approx(cert.beta).epsilon(1e-12));
  return mass_integral / mass;
}

}  // namespace

TEST_SUITE("rearrange") {
  TEST_CASE("rearrangement of a constant is one level") {
    const auto tree = TreePartition::build(2, 3);
    const auto r = decreasing_rearrangement(StepFunction::constant(tree, 2.0), NodeId{1, 1});
    REQUIRE(r.levels().size() == 1);
    CHECK(r.levels()[0].value == 2.0);
    CHECK(r.levels()[0].mass == 0.5);
    CHECK(r.total_mass() == 0.5);
  }

  TEST_CASE("rearrangement sorts and merges") {
    const auto tree = TreePartition::build(2, 2);
    const auto r = decreasing_rearrangement(StepFunction(tree, {1, 2, 0, 2}), tree.root());
    REQUIRE(r.levels().size() == 3);
    CHECK(r.levels()[0].value == 2.0);
    CHECK(r.levels()[0].mass == 0.5);
    CHECK(r.levels()[1].value == 1.0);
    CHECK(r.levels()[1].mass == 0.25);
    CHECK(r.levels()[2].value == 0.0);
    CHECK(r.levels()[2].mass == 0.25);
  }

  TEST_CASE("rearrangement keeps integral and distribution") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 100; ++rep) {
      const auto tree = TreePartition::build(2, 6);
      const auto v = oracle::random_values(rng, tree.leaf_count());
      const StepFunction phi(tree, v);
      const auto r = decreasing_rearrangement(phi, tree.root());
      CHECK(r.integral() == doctest::Approx(integral(phi)).epsilon(1e-13));
      for (double t : {0.0, 0.1, 0.5, 1.0, 2.0}) {
        double mass = 0.0;
        for (double x : v) mass += x > t ? tree.leaf_measure() : 0.0;
        CHECK(r.distribution(t) == doctest::Approx(mass).epsilon(1e-13));
      }
    }
  }

  TEST_CASE("equal-average subset of a constant starts at zero") {
    const auto tree = TreePartition::build(2, 3);
    const auto phi = StepFunction::constant(tree, 3.0);
    const auto cert = equal_average_subset(phi, tree.root(), 0.3);
    CHECK(cert.offset == 0.0);
    CHECK(cert.average == 3.0);
    CHECK(cert.measure(tree) == doctest::Approx(0.3).epsilon(1e-15));
  }

  TEST_CASE("equal-average subset of a two-level function") {
    const auto tree = TreePartition::build(2, 1);
    const StepFunction phi(tree, {2, 0});
    const auto cert = equal_average_subset(phi, tree.root(), 0.5);
    // Oracle: 2 (1/2 - r) = 1/2 solved by hand, and by bisection on the window.
    CHECK(cert.offset == doctest::Approx(0.25).epsilon(1e-12));
    double lo = 0.0;
    double hi = 0.5;
    for (int i = 0; i < 100; ++i) {
      const double mid = 0.5 * (lo + hi);
      const double window = 2.0 * std::max(0.0, 0.5 - mid);
      (window / 0.5 > 1.0 ? lo : hi) = mid;
    }
    CHECK(cert.offset == doctest::Approx(lo).epsilon(1e-12));
    CHECK(leaf_fraction_average(phi, cert) == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("full-measure subset is the node itself") {
    const auto tree = TreePartition::build(2, 2);
    const StepFunction phi(tree, {4, 1, 0, 3});
    const auto cert = equal_average_subset(phi, NodeId{0, 0}, 1.0);
    CHECK(cert.offset == 0.0);
    double covered = 0.0;
    for (const auto& lf : cert.fractions) covered += lf.fraction;
    CHECK(covered == doctest::Approx(4.0));
  }

  TEST_CASE("equal-average subsets on random data") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 300; ++rep) {
      const auto tree = TreePartition::build(2 + static_cast<int>(rng() % 2), 4);
      const StepFunction phi(tree, oracle::random_values(rng, tree.leaf_count()));
      const auto nodes = tree.nodes();
      const NodeId node = nodes[rng() % nodes.size()];
      const double beta = tree.measure(node) * (0.01 + 0.99 * u(rng));
      const auto cert = equal_average_subset(phi, node, beta);
      const double s = node_average(phi, node);
      CHECK(std::fabs(leaf_fraction_average(phi, cert) - s) <= 1e-9 * std::max(1.0, s));
      // Sandwich: top window >= s >= bottom window.
      const auto r = decreasing_rearrangement(phi, node);
      CHECK(r.window_integral(0.0, beta) / beta >= s - 1e-12);
      CHECK(r.window_integral(r.total_mass() - beta, beta) / beta <= s + 1e-12);
    }
  }

  TEST_CASE("equal-average subset rejects beta out of range") {
    const auto tree = TreePartition::build(2, 2);
    const StepFunction phi(tree, {1, 2, 3, 4});
    CHECK_THROWS_AS(equal_average_subset(phi, NodeId{1, 0}, 0.0), DomainError);
    CHECK_THROWS_AS(equal_average_subset(phi, NodeId{1, 0}, 0.75), DomainError);
  }

  TEST_CASE("select_subfamily follows the leaf-count expansion") {
    const auto tree = TreePartition::build(2, 3);
    auto total = [&](const std::vector<NodeId>& nodes) {
      double m = 0.0;
      for (const NodeId n : nodes) m += tree.measure(n);
      return m;
    };
    const auto half = select_subfamily(tree, tree.root(), 0.5);
    REQUIRE(half.size() == 1);
    CHECK(half[0] == NodeId{1, 0});

    const auto five_eighths = select_subfamily(tree, tree.root(), 0.375);
    REQUIRE(five_eighths.size() == 2);
    CHECK(five_eighths[0] == NodeId{1, 0});
    CHECK(five_eighths[1] == NodeId{3, 4});
    CHECK(total(five_eighths) == 0.625);

    const auto eighth = select_subfamily(tree, NodeId{1, 0}, 0.75);
    REQUIRE(eighth.size() == 1);
    CHECK(eighth[0] == NodeId{3, 0});
  }

  TEST_CASE("select_subfamily returns disjoint nodes on random targets") {
    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 200; ++rep) {
      const int arity = 2 + static_cast<int>(rng() % 3);
      const auto tree = TreePartition::build(arity, 4);
      const auto nodes = tree.nodes();
      NodeId node = nodes[rng() % nodes.size()];
      if (tree.is_leaf(node)) node = tree.root();
      const std::uint64_t size = tree.interval(node).size();
      const std::uint64_t take = 1 + rng() % (size - 1);
      const double a = 1.0 - static_cast<double>(take) / static_cast<double>(size);
      const auto chosen = select_subfamily(tree, node, a);
      std::vector<int> hits(tree.leaf_count(), 0);
      std::uint64_t count = 0;
      for (const NodeId n : chosen) {
        const auto run = tree.interval(n);
        CHECK(run.begin >= tree.interval(node).begin);
        CHECK(run.end <= tree.interval(node).end);
        for (auto i = run.begin; i < run.end; ++i) ++hits[i];
        count += run.size();
      }
      CHECK(count == take);
      CHECK(*std::max_element(hits.begin(), hits.end()) <= 1);
    }
  }

  TEST_CASE("select_subfamily names the nearest representable targets") {
    const auto tree = TreePartition::build(2, 3);
    try {
      select_subfamily(tree, tree.root(), 0.3);
      FAIL("expected DomainError");
    } catch (const DomainError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("0.625") != std::string::npos);
      CHECK(msg.find("0.75") != std::string::npos);
    }
    CHECK_THROWS_AS(select_subfamily(tree, tree.root(), 0.0), DomainError);
    CHECK_THROWS_AS(select_subfamily(tree, tree.root(), 1.0), DomainError);
  }

  TEST_CASE("partition_equal_average on a single mass covers everything") {
    const auto r = Rearrangement::from_pairs({{2.0, 0.5}, {0.0, 0.5}});
    const std::vector<double> masses{1.0};
    const auto parts = partition_equal_average(r, masses);
    REQUIRE(parts.size() == 1);
    CHECK(parts[0].mass == doctest::Approx(1.0));
    CHECK(parts[0].integral == doctest::Approx(1.0));
  }

  TEST_CASE("partition_equal_average splits a two-level function in halves") {
    const auto r = Rearrangement::from_pairs({{2.0, 0.5}, {0.0, 0.5}});
    const std::vector<double> masses{0.5, 0.5};
    const auto parts = partition_equal_average(r, masses);
    REQUIRE(parts.size() == 2);
    REQUIRE(!parts[0].pieces.empty());
    CHECK(parts[0].pieces.front().lo == doctest::Approx(0.25));
    CHECK(parts[0].pieces.back().hi == doctest::Approx(0.75));
    for (const auto& part : parts) {
      CHECK(part.mass == doctest::Approx(0.5));
      CHECK(part.average() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(integral_over(r, part.pieces) == doctest::Approx(part.integral).epsilon(1e-12));
    }
  }

  TEST_CASE("partition_equal_average on random profiles") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
      std::vector<Level> cells;
      const int count = 5 + static_cast<int>(rng() % 40);
      double value = 10.0;
      for (int i = 0; i < count; ++i) {
        value *= 0.5 + 0.5 * u(rng);
        cells.push_back({value, 1.0 / count});
      }
      const auto r = Rearrangement::from_sorted_cells(cells);
      std::vector<double> masses;
      double left = r.total_mass();
      while (left > 1e-9) {
        const double m = std::min(left, r.total_mass() * (0.05 + 0.3 * u(rng)));
        masses.push_back(m);
        left -= m;
      }
      const auto parts = partition_equal_average(r, masses);
      REQUIRE(parts.size() == masses.size());
      double sum = 0.0;
      double covered = 0.0;
      for (std::size_t j = 0; j < parts.size(); ++j) {
        CHECK(parts[j].mass == doctest::Approx(masses[j]).epsilon(1e-12));
        CHECK(parts[j].average() == doctest::Approx(r.average()).epsilon(1e-9));
        sum += parts[j].integral;
        for (const auto& iv : parts[j].pieces) covered += iv.length();
      }
      CHECK(sum == doctest::Approx(r.integral()).epsilon(1e-13));
      CHECK(covered == doctest::Approx(r.total_mass()).epsilon(1e-12));
    }
  }

  TEST_CASE("any split of a constant keeps the constant") {
    const auto r = Rearrangement::from_pairs({{1.5, 1.0}});
    const std::vector<double> masses{0.2, 0.3, 0.5};
    for (const auto& part : partition_equal_average(r, masses)) {
      CHECK(part.average() == doctest::Approx(1.5).epsilon(1e-15));
    }
  }

  TEST_CASE("snap_down_quanta") {
    const auto tree = TreePartition::build(2, 4);
    CHECK(snap_down_quanta(tree, 0.25) == 4);
    CHECK(snap_down_quanta(tree, 0.26) == 4);
    CHECK(snap_down_quanta(tree, 0.01) == 0);
  }
}
