#include "treecmp/pivotal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "treecmp/sphere.hpp"

namespace treecmp {

namespace {

constexpr double kPi = std::numbers::pi;

// First coordinate along the pole line and radius in the normal space.
std::pair<double, double> leaf_frame(const GeodesicBipolarTree& tree, std::size_t i) {
  const PivotalLeaf& leaf = tree.leaves.at(i);
  const double along = leaf.r * std::cos(leaf.beta);
  const double radius = leaf.r * std::sin(leaf.beta);
  return {leaf.pole == 1 ? along : tree.pole_dist - along, std::max(0.0, radius)};
}

double angle_between(const Vector& a, const Vector& b) {
  return 2.0 * std::atan2((a - b).norm(), (a + b).norm());
}

const LeafTarget* find_target(const GeodesicBipolarTree& tree, std::size_t i, std::size_t j) {
  for (const auto& t : tree.targets) {
    if ((t.i == i && t.j == j) || (t.i == j && t.j == i)) return &t;
  }
  return nullptr;
}

}  // namespace

void GeodesicBipolarTree::validate() const {
  if (!(pole_dist > 0) || !std::isfinite(pole_dist)) {
    throw Error(Errc::InvalidInput, "pole distance must be positive");
  }
  for (const auto& leaf : leaves) {
    if (leaf.pole != 1 && leaf.pole != 2) throw Error(Errc::InvalidInput, "leaf pole must be 1 or 2");
    if (!(leaf.r >= 0) || !std::isfinite(leaf.r)) throw Error(Errc::InvalidInput, "edge length must be >= 0");
    if (!(leaf.beta >= 0 && leaf.beta <= kPi)) {
      throw Error(Errc::AngleOutOfRange, "hinge angle outside [0, pi]");
    }
  }
  for (const auto& t : targets) {
    if (t.i >= leaves.size() || t.j >= leaves.size() || t.i == t.j) {
      throw Error(Errc::InvalidInput, "target refers to a missing leaf pair");
    }
    if (!(t.distance >= 0) || !std::isfinite(t.distance)) {
      throw Error(Errc::InvalidInput, "target distance must be finite and >= 0");
    }
    const PivotalLeaf& a = leaves[t.i];
    const PivotalLeaf& b = leaves[t.j];
    const double path = a.r + b.r + (a.pole == b.pole ? 0.0 : pole_dist);
    if (t.distance > path * (1 + 1e-12) + 1e-12) {
      throw Error(Errc::InvalidInput, "target exceeds the tree path length");
    }
  }
  if (!cross_targets.empty() && cross_targets.size() != leaves.size()) {
    throw Error(Errc::InvalidInput, "cross targets need one entry per leaf");
  }
}

double pivotal_distance(const GeodesicBipolarTree& tree, std::size_t i, std::size_t j,
                        double theta) {
  if (!(theta >= 0 && theta <= kPi)) throw Error(Errc::AngleOutOfRange, "angle outside [0, pi]");
  const auto [ai, ri] = leaf_frame(tree, i);
  const auto [aj, rj] = leaf_frame(tree, j);
  // |u - v|^2 for radii ri, rj at angle theta, written to stay >= 0.
  const double diff = ri - rj;
  const double normal_sq = diff * diff + 2.0 * ri * rj * (1.0 - std::cos(theta));
  return std::sqrt((ai - aj) * (ai - aj) + std::max(0.0, normal_sq));
}

AlphaResult compute_alpha(const GeodesicBipolarTree& tree, std::size_t i, std::size_t j) {
  const LeafTarget* t = find_target(tree, i, j);
  if (t == nullptr) return {true, 0.0};
  const double target = t->distance;
  if (pivotal_distance(tree, i, j, 0.0) >= target) return {true, 0.0};
  const double top = pivotal_distance(tree, i, j, kPi);
  if (top < target - 1e-12) return {false, kPi};
  if (top <= target) return {true, kPi};
  double lo = 0.0;
  double hi = kPi;
  while (hi - lo > 1e-14) {
    const double mid = 0.5 * (lo + hi);
    (pivotal_distance(tree, i, j, mid) < target ? lo : hi) = mid;
  }
  return {true, hi};
}

Matrix compute_alphas(const GeodesicBipolarTree& tree) {
  const std::size_t k = tree.leaves.size();
  Matrix out = Matrix::Zero(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const AlphaResult a = compute_alpha(tree, i, j);
      out(i, j) = out(j, i) = a.satisfiable ? a.alpha : std::numeric_limits<double>::infinity();
    }
  }
  return out;
}

CorollaryCheck check_corollary(const Matrix& alphas) {
  const Eigen::Index k = alphas.rows();
  CorollaryCheck out;
  out.pairs_ok = true;
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i + 1; j < k; ++j) {
      if (!(alphas(i, j) <= kPi + 1e-12)) out.pairs_ok = false;
    }
  }
  out.worst_triple_sum = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i + 1; j < k; ++j) {
      for (Eigen::Index l = j + 1; l < k; ++l) {
        const double sum = alphas(i, j) + alphas(j, l) + alphas(l, i);
        if (sum > out.worst_triple_sum) {
          out.worst_triple_sum = sum;
          out.worst_triple = {std::size_t(i), std::size_t(j), std::size_t(l)};
        }
      }
    }
  }
  if (k < 3) out.worst_triple_sum = 0.0;
  out.triples_ok = out.worst_triple_sum <= 2.0 * kPi + 1e-12;
  return out;
}

namespace {

struct Descent {
  double energy = 0.0;
  Matrix xi;
};

double direction_energy(const Matrix& xi, const Matrix& alphas) {
  double e = 0.0;
  for (Eigen::Index i = 0; i < xi.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < xi.rows(); ++j) {
      const double gap = angle_between(xi.row(i).transpose(), xi.row(j).transpose()) - alphas(i, j);
      if (gap < 0) e += gap * gap;
    }
  }
  return e;
}

// Riemannian gradient, row i tangent at xi_i.
Matrix direction_gradient(const Matrix& xi, const Matrix& alphas) {
  const Eigen::Index k = xi.rows();
  const Eigen::Index dim = xi.cols();
  Matrix g = Matrix::Zero(k, dim);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      if (i == j) continue;
      const Vector a = xi.row(i).transpose();
      const Vector b = xi.row(j).transpose();
      const double theta = angle_between(a, b);
      const double gap = theta - alphas(i, j);
      if (gap >= 0) continue;
      Vector dir = b - a.dot(b) * a;  // the angle shrinks when a moves this way
      double n = dir.norm();
      if (n < 1e-14) {
        // Coincident directions: any tangent direction separates them.
        dir = sphere::project_tangent(a, Vector::Unit(dim, std::abs(a(0)) < 0.9 ? 0 : 1));
        n = dir.norm();
      }
      g.row(i) += (2.0 * gap) * (-dir / n).transpose();
    }
  }
  return g;
}

Descent descend(Matrix xi, const Matrix& alphas, int max_iter) {
  double energy = direction_energy(xi, alphas);
  double step = 0.5;
  for (int it = 0; it < max_iter && energy > 1e-16; ++it) {
    const Matrix g = direction_gradient(xi, alphas);
    const double g2 = g.squaredNorm();
    if (g2 == 0.0) break;
    step = std::min(1.0, 2.0 * step);
    bool moved = false;
    while (step > 1e-20) {
      Matrix next = xi - step * g;
      next.rowwise().normalize();
      const double e = direction_energy(next, alphas);
      if (e <= energy - 1e-4 * step * g2) {
        xi = std::move(next);
        energy = e;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return {energy, std::move(xi)};
}

Matrix random_directions(Eigen::Index k, int dim, std::uint64_t seed, int start) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(start)};
  std::mt19937_64 rng(seq);
  Matrix xi(k, dim);
  for (Eigen::Index i = 0; i < k; ++i) xi.row(i) = sphere::random_point(dim - 1, rng).transpose();
  return xi;
}

}  // namespace

RealizeResult realize_directions(const Matrix& alphas, int dim, const RealizeOptions& opts) {
  const Eigen::Index k = alphas.rows();
  if (alphas.cols() != k) throw Error(Errc::DimensionMismatch, "alphas must be square");
  if (dim < 1) throw Error(Errc::InvalidInput, "dimension must be >= 1");
  if (!alphas.allFinite()) throw Error(Errc::InvalidInput, "alphas must be finite");
  const int starts = std::max(1, opts.starts);
  std::vector<Descent> runs(starts);
  if (opts.exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int s = 0; s < starts; ++s) {
      runs[s] = descend(random_directions(k, dim, opts.seed, s), alphas, opts.max_iter);
    }
  } else {
    for (int s = 0; s < starts; ++s) {
      runs[s] = descend(random_directions(k, dim, opts.seed, s), alphas, opts.max_iter);
    }
  }
  int best = 0;
  for (int s = 1; s < starts; ++s) {
    if (runs[s].energy < runs[best].energy) best = s;
  }
  RealizeResult out;
  out.best_start = best;
  out.energy = runs[best].energy;
  out.xi = std::move(runs[best].xi);
  out.min_slack = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i + 1; j < k; ++j) {
      const double theta = angle_between(out.xi.row(i).transpose(), out.xi.row(j).transpose());
      out.min_slack = std::min(out.min_slack, theta - alphas(i, j));
    }
  }
  if (k < 2) out.min_slack = 0.0;
  out.success = out.energy <= 1e-16 && out.min_slack >= -1e-7;
  return out;
}

PivotalResult pivotal_comparison(const GeodesicBipolarTree& tree, const RealizeOptions& opts) {
  tree.validate();
  const std::size_t k = tree.leaves.size();
  if (k > 4) throw Error(Errc::InvalidInput, "the pivotal route covers at most four leaves");
  PivotalResult out;
  out.alphas = compute_alphas(tree);
  out.corollary = check_corollary(out.alphas);
  if (!out.corollary.pairs_ok) {
    out.failure = "unsatisfiable pair";
    return out;
  }
  const int dim = std::max<int>(2, int(k));
  out.realize = realize_directions(out.alphas, dim, opts);
  if (!out.realize.success) {
    out.failure = "direction realization failed";
    return out;
  }

  PivotalConfig& cfg = out.config;
  cfg.xi = out.realize.xi;
  cfg.theta = Matrix::Zero(k, k);
  cfg.coords = Matrix::Zero(k + 2, dim + 1);
  cfg.coords(1, 0) = tree.pole_dist;
  for (std::size_t i = 0; i < k; ++i) {
    const auto [along, radius] = leaf_frame(tree, i);
    cfg.coords(2 + i, 0) = along;
    cfg.coords.row(2 + i).tail(dim) = radius * cfg.xi.row(i);
    for (std::size_t j = 0; j < k; ++j) {
      if (i != j) cfg.theta(i, j) = angle_between(cfg.xi.row(i).transpose(), cfg.xi.row(j).transpose());
    }
  }

  // Equal relations: pole distance, edge lengths, hinge angles.
  out.equal_error = std::abs((cfg.coords.row(1) - cfg.coords.row(0)).norm() - tree.pole_dist);
  for (std::size_t i = 0; i < k; ++i) {
    const PivotalLeaf& leaf = tree.leaves[i];
    const Vector pole = cfg.coords.row(leaf.pole == 1 ? 0 : 1).transpose();
    const Vector other = cfg.coords.row(leaf.pole == 1 ? 1 : 0).transpose();
    const Vector edge = cfg.coords.row(2 + i).transpose() - pole;
    out.equal_error = std::max(out.equal_error, std::abs(edge.norm() - leaf.r));
    if (leaf.r > 1e-9) {
      const Vector axis = (other - pole).normalized();
      const double hinge = angle_between(edge.normalized(), axis);
      out.equal_error = std::max(out.equal_error, std::abs(hinge - leaf.beta) * leaf.r);
    }
  }
  // AtLeast relations.
  out.atleast_slack = std::numeric_limits<double>::infinity();
  for (const auto& t : tree.targets) {
    const double model = (cfg.coords.row(2 + t.i) - cfg.coords.row(2 + t.j)).norm();
    out.atleast_slack = std::min(out.atleast_slack, model - t.distance);
  }
  for (std::size_t i = 0; i < tree.cross_targets.size(); ++i) {
    const int other = tree.leaves[i].pole == 1 ? 1 : 0;
    const double model = (cfg.coords.row(2 + i) - cfg.coords.row(other)).norm();
    out.atleast_slack = std::min(out.atleast_slack, model - tree.cross_targets[i]);
  }
  if (!std::isfinite(out.atleast_slack)) out.atleast_slack = 0.0;

  const double scale = std::max(1.0, tree.pole_dist);
  if (out.equal_error > 1e-10 * scale) {
    out.failure = "assembled configuration misses an equal relation";
  } else if (out.atleast_slack < -1e-6 * scale) {
    out.failure = "assembled configuration misses a target";
  } else {
    out.success = true;
  }
  return out;
}

SampledTree sample_sphere_tree(int first, int second, int d, std::mt19937_64& rng) {
  if (first < 0 || second < 0 || d < 1) throw Error(Errc::InvalidInput, "bad sampling shape");
  SampledTree out;
  const int k = first + second;
  out.points = Matrix(k + 2, d + 1);
  Vector p1;
  Vector p2;
  do {
    p1 = sphere::random_point(d, rng);
    p2 = sphere::random_point(d, rng);
  } while (sphere::dist(p1, p2) < 1e-3 || sphere::dist(p1, p2) > kPi - 1e-3);
  out.points.row(0) = p1.transpose();
  out.points.row(1) = p2.transpose();
  GeodesicBipolarTree& tree = out.tree;
  tree.pole_dist = sphere::dist(p1, p2);
  const double l = tree.pole_dist;
  for (int i = 0; i < k; ++i) {
    const int pole = i < first ? 1 : 2;
    const Vector& own = pole == 1 ? p1 : p2;
    const Vector& other = pole == 1 ? p2 : p1;
    Vector x;
    double r = 0.0;
    do {
      x = sphere::random_point(d, rng);
      r = sphere::dist(own, x);
    } while (r < 1e-3 || r > kPi - 1e-3 || sphere::dist(other, x) > kPi - 1e-3);
    out.points.row(2 + i) = x.transpose();
    const double c = (std::cos(sphere::dist(other, x)) - std::cos(l) * std::cos(r)) /
                     (std::sin(l) * std::sin(r));
    tree.leaves.push_back({pole, r, std::acos(std::clamp(c, -1.0, 1.0))});
    tree.cross_targets.push_back(sphere::dist(other, x));
  }
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      tree.targets.push_back({std::size_t(i), std::size_t(j),
                              sphere::dist(out.points.row(2 + i).transpose(),
                                           out.points.row(2 + j).transpose())});
    }
  }
  return out;
}

}  // namespace treecmp
