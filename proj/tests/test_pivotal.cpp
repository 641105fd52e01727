#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "treecmp/pivotal.hpp"

using namespace treecmp;

namespace {

constexpr double kPi = std::numbers::pi;

// Position of a leaf along the pole axis and its distance from the axis.
std::pair<double, double> frame(const GeodesicBipolarTree& t, const PivotalLeaf& l) {
  const double along = l.pole == 1 ? l.r * std::cos(l.beta) : t.pole_dist - l.r * std::cos(l.beta);
  return {along, l.r * std::sin(l.beta)};
}

GeodesicBipolarTree two_leaves(double target) {
  GeodesicBipolarTree t;
  t.pole_dist = 1.0;
  t.leaves = {{1, 0.8, 1.1}, {2, 0.6, 0.7}};
  t.targets = {{0, 1, target}};
  return t;
}

}  // namespace

TEST_CASE("pivotal distance at the extreme angles") {
  const auto t = two_leaves(1.0);
  const auto [a0, r0] = frame(t, t.leaves[0]);
  const auto [a1, r1] = frame(t, t.leaves[1]);
  CHECK(pivotal_distance(t, 0, 1, 0.0) == doctest::Approx(std::hypot(a0 - a1, r0 - r1)));
  CHECK(pivotal_distance(t, 0, 1, kPi) == doctest::Approx(std::hypot(a0 - a1, r0 + r1)));
  CHECK_THROWS_AS(pivotal_distance(t, 0, 1, 4.0), Error);
}

TEST_CASE("alpha solves the law of cosines") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    GeodesicBipolarTree t;
    t.pole_dist = 0.3 + unit(rng);
    t.leaves = {{1 + int(rng() % 2), 0.1 + unit(rng), kPi * unit(rng)},
                {1 + int(rng() % 2), 0.1 + unit(rng), kPi * unit(rng)}};
    const auto [a0, r0] = frame(t, t.leaves[0]);
    const auto [a1, r1] = frame(t, t.leaves[1]);
    const double lo = std::hypot(a0 - a1, r0 - r1);
    const double hi = std::hypot(a0 - a1, r0 + r1);
    const double target = lo + (hi - lo) * unit(rng);
    t.targets = {{0, 1, target}};
    const double big_a = (a0 - a1) * (a0 - a1) + r0 * r0 + r1 * r1;
    const double expect = std::acos(std::clamp((big_a - target * target) / (2 * r0 * r1), -1.0, 1.0));
    const auto got = compute_alpha(t, 0, 1);
    REQUIRE(got.satisfiable);
    CHECK(pivotal_distance(t, 0, 1, got.alpha) == doctest::Approx(target).epsilon(1e-12));
    // arccos loses accuracy where sin is small
    if (std::sin(expect) > 1e-3) CHECK(got.alpha == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("alpha edge cases") {
  const auto t = two_leaves(1.0);
  const auto [a0, r0] = frame(t, t.leaves[0]);
  const auto [a1, r1] = frame(t, t.leaves[1]);
  CHECK(compute_alpha(two_leaves(0.5 * std::hypot(a0 - a1, r0 - r1)), 0, 1).alpha == 0.0);
  const auto beyond = compute_alpha(two_leaves(std::hypot(a0 - a1, r0 + r1) + 1e-3), 0, 1);
  CHECK_FALSE(beyond.satisfiable);
  GeodesicBipolarTree none = t;
  none.targets.clear();
  CHECK(compute_alpha(none, 0, 1).alpha == 0.0);
  CHECK(std::isinf(compute_alphas(two_leaves(10.0))(0, 1)));
}

TEST_CASE("corollary check") {
  Matrix a = Matrix::Constant(3, 3, 2.0);
  a.diagonal().setZero();
  const auto ok = check_corollary(a);
  CHECK(ok.pairs_ok);
  CHECK(ok.triples_ok);
  CHECK(ok.worst_triple_sum == doctest::Approx(6.0));

  a(0, 1) = a(1, 0) = 2.5;
  CHECK_FALSE(check_corollary(a).triples_ok);
  a(0, 1) = a(1, 0) = kPi + 1e-6;
  CHECK_FALSE(check_corollary(a).pairs_ok);
}

TEST_CASE("direction realization") {
  Matrix three = Matrix::Constant(3, 3, 2 * kPi / 3 - 1e-3);
  three.diagonal().setZero();
  const auto r = realize_directions(three, 2);
  CHECK(r.success);
  CHECK(r.min_slack >= -1e-7);
  for (Eigen::Index i = 0; i < 3; ++i) CHECK(r.xi.row(i).norm() == doctest::Approx(1.0));

  Matrix four = Matrix::Constant(4, 4, 2 * kPi / 3);
  four.diagonal().setZero();
  CHECK_FALSE(realize_directions(four, 3).success);

  RealizeOptions serial;
  serial.exec = Execution::Serial;
  serial.seed = 5;
  RealizeOptions parallel = serial;
  parallel.exec = Execution::Parallel;
  const auto s = realize_directions(three, 3, serial);
  const auto p = realize_directions(three, 3, parallel);
  CHECK(s.best_start == p.best_start);
  CHECK(s.energy == p.energy);
  CHECK(s.xi == p.xi);
}

TEST_CASE("pivotal comparison on sphere-sampled trees") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const bool two_two = trial % 2 == 0;
    const auto st = sample_sphere_tree(two_two ? 2 : 3, two_two ? 2 : 1, 2, rng);
    RealizeOptions o;
    o.seed = std::uint64_t(trial);
    const auto r = pivotal_comparison(st.tree, o);
    REQUIRE(r.success);
    CHECK(r.corollary.pairs_ok);
    CHECK(r.corollary.triples_ok);
    CHECK(r.equal_error <= 1e-8);
    CHECK(r.atleast_slack >= -1e-7);
    CHECK(r.config.coords.rows() == Eigen::Index(2 + st.tree.leaves.size()));
  }
}

TEST_CASE("tree validation") {
  auto t = two_leaves(1.0);
  t.leaves[0].pole = 3;
  CHECK_THROWS_AS(t.validate(), Error);
  t = two_leaves(1.0);
  t.leaves[1].beta = 4.0;
  try {
    t.validate();
    FAIL("expected AngleOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::AngleOutOfRange);
  }
  t = two_leaves(1.0);
  t.targets.push_back({0, 5, 1.0});
  CHECK_THROWS_AS(t.validate(), Error);
  t = two_leaves(1.0);
  t.leaves.resize(5, t.leaves[0]);
  CHECK_THROWS_AS(pivotal_comparison(t), Error);
}
