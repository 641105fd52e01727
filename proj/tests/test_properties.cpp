#include <doctest.h>

#include <numeric>
#include <random>

#include "treecmp/pivotal.hpp"
#include "treecmp/solver.hpp"
#include "treecmp/sphere.hpp"

using namespace treecmp;
namespace sp = treecmp::sphere;

namespace {

FiniteMetricSpace random_metric(std::size_t n, std::mt19937_64& rng) {
  // distances in [1, 2] always satisfy the triangle inequality
  std::uniform_real_distribution<double> unif(1.0, 2.0);
  Matrix d = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d(i, j) = d(j, i) = unif(rng);
  }
  return FiniteMetricSpace::validate(d, default_labels(n));
}

FiniteMetricSpace sphere_metric(std::size_t n, std::mt19937_64& rng) {
  Matrix pts(n, 3);
  for (std::size_t i = 0; i < n; ++i) pts.row(i) = sp::random_point(2, rng).transpose();
  return sp::sphere_space(pts);
}

std::vector<std::size_t> identity(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t(0));
  return v;
}

ComparisonTree star(std::size_t n) {
  std::vector<ComparisonTree::Edge> e;
  for (std::size_t v = 1; v < n; ++v) e.emplace_back(0, v);
  return ComparisonTree::from_edges(n, e);
}

}  // namespace

TEST_CASE("centered matrix follows a relabeling of the leaves") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto space = random_metric(6, rng);
    std::vector<std::size_t> leaves{1, 2, 3, 4, 5};
    const auto base = centered_matrix(space, 0, leaves);
    std::shuffle(leaves.begin(), leaves.end(), rng);
    const auto perm = centered_matrix(space, 0, leaves);
    for (std::size_t a = 0; a < 5; ++a) {
      for (std::size_t b = 0; b < 5; ++b) CHECK(perm.m(a, b) == base.m(leaves[a] - 1, leaves[b] - 1));
    }
  }
}

TEST_CASE("matrix inequality minimum scales with the square of the distances") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto space = random_metric(5, rng);
    const double lambda = 0.5 + 3.0 * double(trial) / 20.0;
    const auto a = matrix_inequality_check(centered_matrix(space, 0));
    const auto b = matrix_inequality_check(centered_matrix(space.scaled(lambda), 0));
    CHECK(b.min_value == doctest::Approx(lambda * lambda * a.min_value).epsilon(1e-9).scale(1e-12));
  }
}

TEST_CASE("embeddable spaces satisfy the matrix inequality at every pole") {
  std::mt19937_64 rng(3);
  int embeddable = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto space = random_metric(3 + trial % 3, rng);
    if (!euclidean_embed(space, 0).embeddable) continue;
    ++embeddable;
    for (std::size_t p = 0; p < space.size(); ++p) CHECK(matrix_inequality_check(centered_matrix(space, p)).holds);
  }
  CHECK(embeddable > 20);
}

TEST_CASE("tree lowering partitions every pair") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 11;
    std::vector<ComparisonTree::Edge> e;
    for (std::size_t v = 1; v < n; ++v) e.emplace_back(std::size_t(rng() % v), v);
    const auto g = tree_to_constraints(ComparisonTree::from_edges(n, e), identity(n));
    CHECK(g.count(Relation::Equal) == n - 1);
    CHECK(g.count(Relation::Equal) + g.count(Relation::AtLeast) == n * (n - 1) / 2);
  }
}

TEST_CASE("m(n) shapes are bipolar") {
  for (int m = 1; m <= 5; ++m) {
    for (int n = 1; n <= 5; ++n) {
      if (m + n < 3) continue;
      const auto t = parse_tree(std::to_string(m) + "(" + std::to_string(n) + ")");
      CHECK(t.poles().size() == 2);
      CHECK(t.size() == std::size_t(m + n + 2));
    }
  }
}

TEST_CASE("relaxing an Equal constraint never creates infeasibility") {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 4 + trial % 3;
    const auto space = trial % 2 ? sphere_metric(n, rng) : random_metric(n, rng);
    std::vector<ComparisonTree::Edge> e;
    for (std::size_t v = 1; v < n; ++v) e.emplace_back(std::size_t(rng() % v), v);
    const auto tree = ComparisonTree::from_edges(n, e);
    auto g = tree_to_constraints(tree, identity(n));
    if (solve(GramProblem::from_constraints(g, space)).status != Status::Feasible) continue;
    ++checked;
    const auto [a, b] = e[rng() % e.size()];
    g.set(a, b, Relation::AtLeast);
    CHECK(solve(GramProblem::from_constraints(g, space)).status != Status::Infeasible);
  }
  CHECK(checked > 10);
}

TEST_CASE("feasible monopolar comparisons imply the matrix inequality at the pole") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 4 + trial % 3;
    const auto space = random_metric(n, rng);
    const auto cert = solve(GramProblem::from_constraints(tree_to_constraints(star(n), identity(n)), space));
    if (cert.status == Status::Feasible) CHECK(matrix_inequality_check(centered_matrix(space, 0)).holds);
  }
}

TEST_CASE("every Feasible verdict verifies") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 3 + trial % 5;
    const auto space = trial % 2 ? sphere_metric(n, rng) : random_metric(n, rng);
    std::vector<ComparisonTree::Edge> e;
    for (std::size_t v = 1; v < n; ++v) e.emplace_back(std::size_t(rng() % v), v);
    const auto geometry = trial % 4 == 1 ? Geometry::Spherical : Geometry::Euclidean;
    const auto problem = GramProblem::from_constraints(
        tree_to_constraints(ComparisonTree::from_edges(n, e), identity(n)), space, geometry);
    const auto cert = solve(problem);
    if (cert.status == Status::Feasible) CHECK(verify_certificate(problem, cert.coordinates, 1e-9).ok);
    if (cert.status == Status::Infeasible) CHECK(cert.gap_bound > 1e-7);
  }
}

TEST_CASE("Euclidean verdicts are scale covariant") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 4 + trial % 3;
    const auto space = random_metric(n, rng);
    const auto g = tree_to_constraints(star(n), identity(n));
    const double lambda = trial % 2 ? 7.5 : 0.04;
    const auto a = solve(GramProblem::from_constraints(g, space));
    const auto b = solve(GramProblem::from_constraints(g, space.scaled(lambda)));
    REQUIRE(a.status == b.status);
    if (a.status == Status::Feasible) {
      const Matrix da = pairwise_distances(a.coordinates);
      const Matrix db = pairwise_distances(b.coordinates);
      CHECK((db - lambda * da).cwiseAbs().maxCoeff() <= 1e-6 * lambda);
    }
  }
}

TEST_CASE("exp and log invert up to pi - 0.1") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 300; ++i) {
    const Vector p = sp::random_point(2, rng);
    Vector v = sp::random_tangent(p, rng);
    v *= (std::numbers::pi - 0.1) * double(i) / 300.0 / v.norm();
    CHECK((sp::log(p, sp::exp(p, v)) - v).norm() <= 1e-10);
  }
}

TEST_CASE("dexp finite-difference bound") {
  std::mt19937_64 rng(10);
  const double h = 1e-4;
  for (int i = 0; i < 100; ++i) {
    const Vector p = sp::random_point(2, rng);
    Vector v = sp::random_tangent(p, rng);
    v *= 3.0 * double(i + 1) / 100.0 / v.norm();
    const Vector w = sp::random_tangent(p, rng).normalized();
    const Vector fd = (sp::exp(p, v + h * w) - sp::exp(p, v - h * w)) / (2 * h);
    CHECK((sp::dexp(p, v, w) - fd).norm() <= 10 * h * h);
  }
}

TEST_CASE("cost-curvature stencil converges") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 30; ++i) {
    const Vector p = sp::random_point(2, rng);
    Vector w = sp::random_tangent(p, rng);
    w *= 0.9 * double(i) / 30.0 / w.norm();
    const Vector x = sp::random_tangent(p, rng).normalized();
    const Vector y = sp::random_tangent(sp::exp(p, w), rng).normalized();
    const double h = 0.02;
    const double s1 = -1.5 * sp::fourth_derivative_at(p, w, x, y, h);
    const double s2 = -1.5 * sp::fourth_derivative_at(p, w, x, y, h / 2);
    const double s4 = -1.5 * sp::fourth_derivative_at(p, w, x, y, h / 4);
    CHECK(std::abs(s1 - s2) <= 4 * std::abs(s2 - s4) + 1e-4);
  }
}

TEST_CASE("pivotal invariants") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const auto st = sample_sphere_tree(trial % 2 ? 3 : 2, trial % 2 ? 1 : 2, 2, rng);
    const auto& t = st.tree;
    for (const auto& target : t.targets) {
      double prev = -1.0;
      for (int s = 0; s <= 64; ++s) {
        const double d = pivotal_distance(t, target.i, target.j, std::numbers::pi * s / 64.0);
        CHECK(d >= prev - 1e-15);
        prev = d;
      }
      const auto a = compute_alpha(t, target.i, target.j);
      if (a.satisfiable && a.alpha > 0 && a.alpha < std::numbers::pi) {
        CHECK(std::abs(pivotal_distance(t, target.i, target.j, a.alpha) - target.distance) <= 1e-10);
      }
    }
    RealizeOptions o;
    o.seed = std::uint64_t(trial);
    const auto r = pivotal_comparison(t, o);
    REQUIRE(r.success);
    CHECK(r.realize.min_slack >= -1e-7);
    // cross pairs: leaf against the pole it is not attached to
    const Matrix& c = r.config.coords;
    for (std::size_t i = 0; i < t.leaves.size(); ++i) {
      const Eigen::Index other = t.leaves[i].pole == 1 ? 1 : 0;
      CHECK((c.row(2 + Eigen::Index(i)) - c.row(other)).norm() >= t.cross_targets[i] - 1e-7);
    }
  }
}
