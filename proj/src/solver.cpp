#include "treecmp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

namespace treecmp {

const char* to_string(Geometry g) noexcept {
  return g == Geometry::Euclidean ? "Euclidean" : "Spherical";
}

const char* to_string(Status s) noexcept {
  switch (s) {
    case Status::Feasible:
      return "Feasible";
    case Status::Infeasible:
      return "Infeasible";
    case Status::Undecided:
      return "Undecided";
  }
  return "Undecided";
}

GramProblem GramProblem::from_constraints(const ConstraintGraph& graph,
                                          const FiniteMetricSpace& space, Geometry geometry) {
  GramProblem p;
  p.k = graph.size();
  p.geometry = geometry;
  const auto& pts = graph.points();
  for (auto v : pts) {
    if (v >= space.size()) throw Error(Errc::IndexOutOfRange, "assignment points outside the space");
  }
  for (std::size_t i = 0; i < p.k; ++i) {
    for (std::size_t j = i + 1; j < p.k; ++j) {
      p.targets.push_back({i, j, space(pts[i], pts[j]), graph.relation(i, j)});
    }
  }
  return p;
}

void GramProblem::validate() const {
  if (k == 0) throw Error(Errc::InvalidProblem, "problem has no points");
  if (targets.size() != k * (k - 1) / 2) throw Error(Errc::InvalidProblem, "every pair needs a target");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j, ++idx) {
      const auto& t = targets[idx];
      if (t.i != i || t.j != j) throw Error(Errc::InvalidProblem, "targets must be in lexicographic pair order");
      if (!std::isfinite(t.distance) || t.distance < 0) {
        throw Error(Errc::InvalidProblem, "targets must be finite and nonnegative");
      }
      if (geometry == Geometry::Spherical && t.relation != Relation::Free &&
          !(t.distance > 0 && t.distance < std::numbers::pi)) {
        throw Error(Errc::DistanceOutOfRange, "pair (" + std::to_string(i) + "," + std::to_string(j) +
                                                  ") target outside (0, pi)");
      }
    }
  }
}

const PairTarget& GramProblem::target(std::size_t i, std::size_t j) const {
  if (i == j || i >= k || j >= k) throw Error(Errc::IndexOutOfRange, "bad pair");
  if (i > j) std::swap(i, j);
  return targets[i * k - i * (i + 1) / 2 + (j - i - 1)];
}

namespace {

double relation_violation(double value, double target, Relation rel) {
  switch (rel) {
    case Relation::Equal:
      return std::abs(value - target);
    case Relation::AtLeast:
      return std::max(0.0, target - value);
    case Relation::AtMost:
      return std::max(0.0, value - target);
    case Relation::Free:
      return 0.0;
  }
  return 0.0;
}

// Mean squared target over constrained pairs; 1 when nothing is constrained.
double euclidean_scale(const GramProblem& p) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& t : p.targets) {
    if (t.relation == Relation::Free) continue;
    sum += t.distance * t.distance;
    ++count;
  }
  return (count == 0 || sum == 0.0) ? 1.0 : sum / double(count);
}

double sphere_angle(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
  return 2.0 * std::atan2((a - b).norm(), (a + b).norm());
}

struct PsdSplit {
  Matrix x;       // projection onto the PSD cone
  Matrix factor;  // x = factor * factor^T, columns by decreasing eigenvalue
};

PsdSplit project_psd(const Matrix& z) {
  const Matrix sym = 0.5 * (z + z.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  const Eigen::Index n = sym.rows();
  PsdSplit out;
  out.factor.resize(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const Eigen::Index src = n - 1 - c;
    out.factor.col(c) = es.eigenvectors().col(src) * std::sqrt(std::max(0.0, es.eigenvalues()(src)));
  }
  out.x = out.factor * out.factor.transpose();
  return out;
}

double max_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

struct Row {
  int i;
  int j;
  double b;  // normalized squared distance (Euclidean) or cosine (Spherical)
  Relation rel;
};

double row_value(const Matrix& g, const Row& r) {
  if (r.i < 0) return g(r.j, r.j);
  return g(r.i, r.i) + g(r.j, r.j) - 2.0 * g(r.i, r.j);
}

// Hildreth dual coordinate ascent onto {G : G_ii + G_jj - 2 G_ij rel b}.
// Index -1 stands for the anchor at the origin, whose Gram entries are zero.
// Multipliers persist between calls as a warm start.
class DistancePolyhedron {
 public:
  explicit DistancePolyhedron(std::vector<Row> rows) : rows_(std::move(rows)), mu_(rows_.size(), 0.0) {}

  Matrix project(const Matrix& z) {
    Matrix g = z;
    for (std::size_t c = 0; c < rows_.size(); ++c) apply(g, rows_[c], mu_[c]);
    for (int sweep = 0; sweep < 2000; ++sweep) {
      double largest = 0.0;
      for (std::size_t c = 0; c < rows_.size(); ++c) {
        const Row& r = rows_[c];
        double next = mu_[c] + (r.b - row_value(g, r)) / (r.i < 0 ? 1.0 : 4.0);
        if (r.rel == Relation::AtLeast) next = std::max(0.0, next);
        if (r.rel == Relation::AtMost) next = std::min(0.0, next);
        const double d = next - mu_[c];
        if (d != 0.0) {
          apply(g, r, d);
          mu_[c] = next;
          largest = std::max(largest, std::abs(d));
        }
      }
      if (largest <= 1e-16) break;
    }
    return g;
  }

 const std::vector<double>& multipliers() const { return mu_; }

  static void apply(Matrix& g, const Row& r, double d) {
    if (r.i < 0) {
      g(r.j, r.j) += d;
      return;
    }
    g(r.i, r.i) += d;
    g(r.j, r.j) += d;
    g(r.i, r.j) -= d;
    g(r.j, r.i) -= d;
  }

 private:
  std::vector<Row> rows_;
  std::vector<double> mu_;
};

// Sign-valid multipliers nu give <S, G> >= sum nu b on the constraint set,
// with S = sum nu a_r. Shifting along `slack` (a positive definite combination
// of rows whose multipliers may decrease) makes S negative semidefinite, and
// then sum nu b / |S| bounds the distance to the PSD cone from below.
double farkas_bound(Matrix s, double value, const Matrix& slack, double slack_b) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(slack, Eigen::EigenvaluesOnly);
  const double floor = es.eigenvalues()(0);
  if (!(floor > 1e-12)) return 0.0;
  const double top = max_eigenvalue(s);
  if (top > 0) {
    const double tau = (top + 1e-14 * s.norm()) / floor;
    s -= tau * slack;
    value -= tau * slack_b;
  }
  const double n = s.norm();
  return (value > 0 && n > 0) ? value / n : 0.0;
}

double euclidean_gram_violation(const Matrix& x, const std::vector<Row>& rows) {
  double worst = 0.0;
  for (const auto& r : rows) {
    worst = std::max(worst, relation_violation(row_value(x, r), r.b, r.rel));
  }
  return worst;
}

// Cosine-domain violation with rows normalized by the diagonal.
double spherical_gram_violation(const Matrix& x, const std::vector<Row>& rows) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) worst = std::max(worst, std::abs(x(i, i) - 1.0));
  for (const auto& r : rows) {
    const double denom = std::sqrt(std::max(1e-300, x(r.i, r.i) * x(r.j, r.j)));
    const double c = x(r.i, r.j) / denom;
    // Larger angle means smaller cosine, so the sense flips.
    Relation flipped = r.rel;
    if (r.rel == Relation::AtLeast) flipped = Relation::AtMost;
    else if (r.rel == Relation::AtMost) flipped = Relation::AtLeast;
    worst = std::max(worst, relation_violation(c, r.b, flipped));
  }
  return worst;
}

Matrix initial_gram(std::size_t k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix z(k, k);
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    for (Eigen::Index j = 0; j < z.cols(); ++j) z(i, j) = normal(rng);
  }
  return z * z.transpose();
}

using ResidualFn = std::function<void(const Vector& z, Vector& r, Matrix* jac)>;

// Levenberg-Marquardt on a least-squares residual. Monotone, so the returned
// point is the best one seen.
Vector levenberg_marquardt(const ResidualFn& f, Vector z, double target, int max_iter = 200) {
  Vector r;
  Matrix jac;
  f(z, r, &jac);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  for (int it = 0; it < max_iter && r.cwiseAbs().maxCoeff() > target; ++it) {
    const Matrix a = jac.transpose() * jac;
    const Vector g = jac.transpose() * r;
    bool improved = false;
    while (lambda < 1e12) {
      Matrix damped = a;
      damped.diagonal().array() += lambda * (1.0 + a.diagonal().array());
      const Vector trial = z - damped.ldlt().solve(g);
      Vector rt;
      f(trial, rt, nullptr);
      const double ct = rt.squaredNorm();
      if (ct < cost) {
        z = trial;
        cost = ct;
        lambda = std::max(1e-12, lambda / 3.0);
        improved = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!improved) break;
    f(z, r, &jac);
  }
  return z;
}

struct Loop {
  std::function<Matrix(const Matrix&)> project_constraints;
  std::function<double(const Matrix&)> gram_violation;
  std::function<std::pair<Matrix, double>(const Matrix& factor)> finalize;  // coords, violation
  std::function<std::pair<Matrix, double>(const Matrix& factor)> polish;    // coords, violation
  // Lower bound on the distance between the constraint set and the PSD cone,
  // from a Farkas certificate built at x; 0 when none is found.
  std::function<double(const Matrix& x)> certify;
};

bool is_checkpoint(std::size_t it) { return it >= 16 && (it & (it - 1)) == 0; }

// With `warm`, x came from caller coordinates and is tried as a witness, then
// polished, before any projections.
Certificate run_dykstra(const Loop& loop, Matrix x, const SolveOptions& opts, bool warm) {
  Certificate cert;
  cert.seed = opts.seed;
  const Eigen::Index k = x.rows();
  Matrix p = Matrix::Zero(k, k);
  Matrix q = Matrix::Zero(k, k);
  double last_violation = std::numeric_limits<double>::infinity();
  Matrix factor;

  auto accept = [&](std::pair<Matrix, double> found) {
    if (found.second > opts.feas_tol) return false;
    cert.status = Status::Feasible;
    cert.coordinates = std::move(found.first);
    cert.max_violation = found.second;
    return true;
  };
  auto refute = [&]() {
    const double bound = loop.certify(x);
    if (bound <= opts.infeas_tol) return false;
    cert.status = Status::Infeasible;
    cert.gap_bound = bound;
    cert.max_violation = last_violation;
    return true;
  };

  if (warm) {
    const PsdSplit split = project_psd(x);
    if (accept(loop.finalize(split.factor)) || accept(loop.polish(split.factor))) return cert;
  }

  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    const Matrix y = loop.project_constraints(x + p);
    p = x + p - y;
    PsdSplit split = project_psd(y + q);
    q = y + q - split.x;
    x = std::move(split.x);
    factor = std::move(split.factor);

    cert.iterations = it;
    cert.gap = (y - x).norm();
    last_violation = loop.gram_violation(x);
    if (last_violation <= opts.feas_tol && accept(loop.finalize(factor))) return cert;
    if (is_checkpoint(it) && accept(loop.polish(factor))) return cert;
    if (it % 100 == 0 && cert.gap > opts.infeas_tol && refute()) return cert;
  }

  cert.max_violation = last_violation;
  if (cert.iterations > 0 && !accept(loop.polish(factor)) && cert.gap > opts.infeas_tol) refute();
  return cert;
}

// Point 0 is pinned at the origin and the Gram matrix covers points 1..k-1.
// Without the pin, translations give the constraint set unbounded directions
// along which it can approach the PSD cone, and a strictly infeasible instance
// would show a gap that decays towards zero instead of settling.
Certificate solve_euclidean(const GramProblem& problem, const SolveOptions& opts,
                            const Matrix* start) {
  const std::size_t k = problem.k;
  const double scale = euclidean_scale(problem);
  std::vector<Row> rows;
  bool any_free = false;
  for (const auto& t : problem.targets) {
    if (t.relation == Relation::Free) {
      any_free = true;
      continue;
    }
    rows.push_back({int(t.i) - 1, int(t.j) - 1, t.distance * t.distance / scale, t.relation});
  }

  auto finalize = [&](const Matrix& factor) {
    Matrix coords = Matrix::Zero(k, k);
    coords.bottomLeftCorner(k - 1, k - 1) = factor * std::sqrt(scale);
    const CertificateCheck chk = verify_certificate(problem, coords, 0.0);
    return std::make_pair(std::move(coords), chk.worst_violation);
  };

  Certificate cert;
  cert.seed = opts.seed;
  if (rows.empty() || k == 1) {
    cert.status = Status::Feasible;
    cert.coordinates = Matrix::Zero(k, k);
    return cert;
  }

  // The targets themselves, when Euclidean, are a witness.
  if (!any_free) {
    Matrix g(k - 1, k - 1);
    for (std::size_t i = 1; i < k; ++i) {
      for (std::size_t j = 1; j < k; ++j) {
        const double di = problem.target(0, i).distance;
        const double dj = problem.target(0, j).distance;
        const double dij = i == j ? 0.0 : problem.target(i, j).distance;
        g(i - 1, j - 1) = 0.5 * (di * di + dj * dj - dij * dij) / scale;
      }
    }
    const PsdSplit split = project_psd(g);
    auto [coords, measured] = finalize(split.factor);
    if (measured <= opts.feas_tol) {
      cert.status = Status::Feasible;
      cert.coordinates = std::move(coords);
      cert.max_violation = measured;
      return cert;
    }
  }

  // Random Gaussian start scaled to the mean target.
  Matrix x = initial_gram(k - 1, opts.seed);
  double mean = 0.0;
  for (const auto& r : rows) mean += row_value(x, r);
  mean /= double(rows.size());
  if (mean > 0) x /= mean;
  if (start) {
    const Matrix rel = start->bottomRows(Eigen::Index(k) - 1).rowwise() - start->row(0);
    x = rel * rel.transpose() / scale;
  }

  const Eigen::Index n = Eigen::Index(k) - 1;
  auto residual = [&](const Vector& z, Vector& r, Matrix* jac) {
    const Eigen::Map<const Matrix> y(z.data(), n, n);
    r.setZero(Eigen::Index(rows.size()));
    if (jac) jac->setZero(r.size(), z.size());
    for (std::size_t c = 0; c < rows.size(); ++c) {
      const Row& row = rows[c];
      const Vector diff = row.i < 0 ? Vector(y.row(row.j)) : Vector(y.row(row.j) - y.row(row.i));
      const double v = diff.squaredNorm() - row.b;
      const bool active = row.rel == Relation::Equal || (row.rel == Relation::AtLeast && v < 0) ||
                          (row.rel == Relation::AtMost && v > 0);
      if (!active) continue;
      r(c) = v;
      if (!jac) continue;
      for (Eigen::Index m = 0; m < n; ++m) {
        (*jac)(c, row.j + m * n) += 2.0 * diff(m);
        if (row.i >= 0) (*jac)(c, row.i + m * n) -= 2.0 * diff(m);
      }
    }
  };
  auto polish = [&](const Matrix& factor) {
    Vector z = Eigen::Map<const Vector>(factor.data(), factor.size());
    z = levenberg_marquardt(residual, std::move(z), 1e-2 * opts.feas_tol);
    return finalize(Eigen::Map<const Matrix>(z.data(), n, n));
  };

  Matrix slack = Matrix::Zero(n, n);
  double slack_b = 0.0;
  for (const auto& r : rows) {
    if (r.rel == Relation::AtLeast) continue;
    DistancePolyhedron::apply(slack, r, 1.0);
    slack_b += r.b;
  }
  auto certify = [&](const Matrix& x) {
    DistancePolyhedron fresh(rows);
    fresh.project(x);
    Matrix s = Matrix::Zero(n, n);
    double value = 0.0;
    for (std::size_t c = 0; c < rows.size(); ++c) {
      DistancePolyhedron::apply(s, rows[c], fresh.multipliers()[c]);
      value += fresh.multipliers()[c] * rows[c].b;
    }
    return farkas_bound(std::move(s), value, slack, slack_b);
  };

  DistancePolyhedron poly(rows);
  Loop loop{
      [&](const Matrix& z) { return poly.project(z); },
      [&](const Matrix& g) { return euclidean_gram_violation(g, rows); },
      finalize,
      polish,
      certify,
  };
  return run_dykstra(loop, std::move(x), opts, start != nullptr);
}

Certificate spherical_impl(const GramProblem& problem, const SolveOptions& opts, const Matrix* start);

}  // namespace

Certificate spherical_solve(const GramProblem& problem, const SolveOptions& opts) {
  if (problem.geometry != Geometry::Spherical) {
    throw Error(Errc::InvalidProblem, "spherical_solve needs a Spherical problem");
  }
  problem.validate();
  return spherical_impl(problem, opts, nullptr);
}

namespace {

Certificate spherical_impl(const GramProblem& problem, const SolveOptions& opts, const Matrix* start) {
  const std::size_t k = problem.k;

  std::vector<Row> rows;
  bool any_free = false;
  // Entry bounds on the cosine Gram matrix; the diagonal is fixed at 1.
  Matrix lower = Matrix::Constant(k, k, -std::numeric_limits<double>::infinity());
  Matrix upper = Matrix::Constant(k, k, std::numeric_limits<double>::infinity());
  lower.diagonal().setOnes();
  upper.diagonal().setOnes();
  for (const auto& t : problem.targets) {
    if (t.relation == Relation::Free) {
      any_free = true;
      continue;
    }
    const double c = std::cos(t.distance);
    rows.push_back({int(t.i), int(t.j), c, t.relation});
    double lo = -1.0;
    double hi = 1.0;
    if (t.relation == Relation::Equal) lo = hi = c;
    if (t.relation == Relation::AtLeast) hi = c;
    if (t.relation == Relation::AtMost) lo = c;
    lower(t.i, t.j) = lower(t.j, t.i) = lo;
    upper(t.i, t.j) = upper(t.j, t.i) = hi;
  }

  auto finalize = [&](const Matrix& factor) {
    Matrix coords = factor;
    for (Eigen::Index r = 0; r < coords.rows(); ++r) {
      const double n = coords.row(r).norm();
      if (n > 0) coords.row(r) /= n;
    }
    const CertificateCheck chk = verify_certificate(problem, coords, 0.0);
    return std::make_pair(std::move(coords), chk.worst_violation);
  };

  Certificate cert;
  cert.seed = opts.seed;
  if (!any_free) {
    Matrix c = Matrix::Identity(k, k);
    for (const auto& r : rows) c(r.i, r.j) = c(r.j, r.i) = r.b;
    const PsdSplit split = project_psd(c);
    auto [coords, measured] = finalize(split.factor);
    if (measured <= opts.feas_tol) {
      cert.status = Status::Feasible;
      cert.coordinates = std::move(coords);
      cert.max_violation = measured;
      return cert;
    }
  }

  Matrix x = initial_gram(k, opts.seed);
  const Vector d = x.diagonal().cwiseSqrt().cwiseInverse();
  x = d.asDiagonal() * x * d.asDiagonal();
  if (start) {
    if (start->rows() != Eigen::Index(k)) throw Error(Errc::InvalidInput, "start needs one row per point");
    Matrix unit = *start;
    for (Eigen::Index r = 0; r < unit.rows(); ++r) {
      const double len = unit.row(r).norm();
      if (len > 0) unit.row(r) /= len;
    }
    x = unit * unit.transpose();
  }

  const Eigen::Index n = Eigen::Index(k);
  auto residual = [&](const Vector& z, Vector& r, Matrix* jac) {
    const Eigen::Map<const Matrix> y(z.data(), n, n);
    r.setZero(n + Eigen::Index(rows.size()));
    if (jac) jac->setZero(r.size(), z.size());
    for (Eigen::Index i = 0; i < n; ++i) {
      r(i) = y.row(i).squaredNorm() - 1.0;
      if (!jac) continue;
      for (Eigen::Index m = 0; m < n; ++m) (*jac)(i, i + m * n) = 2.0 * y(i, m);
    }
    for (std::size_t c = 0; c < rows.size(); ++c) {
      const Row& row = rows[c];
      const double v = y.row(row.i).dot(y.row(row.j)) - row.b;
      // Cosine decreases with angle, so the inequality senses flip.
      const bool active = row.rel == Relation::Equal || (row.rel == Relation::AtLeast && v > 0) ||
                          (row.rel == Relation::AtMost && v < 0);
      if (!active) continue;
      const Eigen::Index e = n + Eigen::Index(c);
      r(e) = v;
      if (!jac) continue;
      for (Eigen::Index m = 0; m < n; ++m) {
        (*jac)(e, row.i + m * n) += y(row.j, m);
        (*jac)(e, row.j + m * n) += y(row.i, m);
      }
    }
  };
  auto polish = [&](const Matrix& factor) {
    Vector z = Eigen::Map<const Vector>(factor.data(), factor.size());
    z = levenberg_marquardt(residual, std::move(z), 1e-2 * opts.feas_tol);
    return finalize(Eigen::Map<const Matrix>(z.data(), n, n));
  };
  // Clamping x into the entry box gives sign-valid multipliers directly; the
  // fixed unit diagonal supplies the identity shift.
  auto certify = [&](const Matrix& x) {
    const Matrix y = x.cwiseMax(lower).cwiseMin(upper);
    Matrix s = y - x;
    const double value = (s.array() * y.array()).sum();
    return farkas_bound(std::move(s), value, Matrix::Identity(n, n), double(n));
  };

  Loop loop{
      [&](const Matrix& z) { return z.cwiseMax(lower).cwiseMin(upper).eval(); },
      [&](const Matrix& g) { return spherical_gram_violation(g, rows); },
      finalize,
      polish,
      certify,
  };
  return run_dykstra(loop, std::move(x), opts, start != nullptr);
}

}  // namespace

Certificate solve(const GramProblem& problem, const SolveOptions& opts) {
  problem.validate();
  if (problem.geometry == Geometry::Spherical) return spherical_impl(problem, opts, nullptr);
  return solve_euclidean(problem, opts, nullptr);
}

Certificate solve_from(const GramProblem& problem, const Matrix& start, const SolveOptions& opts) {
  problem.validate();
  if (start.rows() != Eigen::Index(problem.k)) {
    throw Error(Errc::InvalidInput, "start needs one row per point");
  }
  if (problem.geometry == Geometry::Spherical) return spherical_impl(problem, opts, &start);
  return solve_euclidean(problem, opts, &start);
}

CertificateCheck verify_certificate(const GramProblem& problem, const Matrix& coordinates,
                                    double tol) {
  if (static_cast<std::size_t>(coordinates.rows()) != problem.k) {
    throw Error(Errc::DimensionMismatch, "expected one coordinate row per model point");
  }
  CertificateCheck out;
  const bool spherical = problem.geometry == Geometry::Spherical;
  Matrix rows = coordinates;
  if (spherical) {
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
      const double n = rows.row(r).norm();
      if (n > 0) rows.row(r) /= n;
    }
  }
  const double scale = spherical ? 1.0 : euclidean_scale(problem);
  bool first = true;
  for (const auto& t : problem.targets) {
    if (t.relation == Relation::Free) continue;
    double v = 0.0;
    if (spherical) {
      const double angle = sphere_angle(rows.row(t.i).transpose(), rows.row(t.j).transpose());
      v = relation_violation(angle, t.distance, t.relation);
    } else {
      const double d2 = (rows.row(t.i) - rows.row(t.j)).squaredNorm();
      v = relation_violation(d2, t.distance * t.distance, t.relation) / scale;
    }
    if (first || v > out.worst_violation) {
      out.worst_violation = v;
      out.worst_pair = {t.i, t.j};
      first = false;
    }
  }
  out.ok = out.worst_violation <= tol;
  return out;
}

PlantedInstance plant_feasible(const ComparisonTree& tree, int ambient_dim, std::uint64_t seed) {
  if (ambient_dim < 1) throw Error(Errc::InvalidInput, "ambient_dim must be >= 1");
  const std::size_t n = tree.size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix pts(n, ambient_dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < ambient_dim; ++c) pts(i, c) = normal(rng);
  }
  std::vector<std::string> labels = tree.labeled() ? tree.labels() : default_labels(n);
  std::vector<std::size_t> assignment(n);
  for (std::size_t v = 0; v < n; ++v) assignment[v] = v;
  return {FiniteMetricSpace::validate(pairwise_distances(pts), std::move(labels), 1e-12), assignment,
          pts};
}

}  // namespace treecmp
