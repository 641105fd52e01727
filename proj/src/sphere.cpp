#include "treecmp/sphere.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace treecmp::sphere {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCutGuard = 1e-6;
constexpr std::array<double, 5> kSecond = {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};

double half_sq_dist(const Vector& a, const Vector& b) {
  const double d = dist(a, b);
  if (d >= kPi - kCutGuard) throw Error(Errc::CutLocusContact, "stencil point reached the cut locus");
  return 0.5 * d * d;
}

// sin(x)/x, accurate near 0.
double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

void check_step(double step) {
  if (!(step > 1e-4)) throw Error(Errc::StepTooSmall, "step must exceed 1e-4");
  if (!(step < 1e-1)) throw Error(Errc::StepTooLarge, "step must be below 1e-1");
}

}  // namespace

void require_unit(const Vector& p) {
  if (!p.allFinite() || std::abs(p.norm() - 1.0) > 1e-12) {
    throw Error(Errc::NotUnit, "sphere point is not a unit vector");
  }
}

void require_tangent(const Vector& p, const Vector& v) {
  if (v.size() != p.size()) throw Error(Errc::DimensionMismatch, "tangent vector has wrong dimension");
  if (!v.allFinite() || std::abs(v.dot(p)) > 1e-12 * std::max(1.0, v.norm())) {
    throw Error(Errc::NotTangent, "vector is not tangent at the base point");
  }
}

double dist(const Vector& p, const Vector& q) {
  require_unit(p);
  require_unit(q);
  if (p.size() != q.size()) throw Error(Errc::DimensionMismatch, "points live in different spheres");
  return 2.0 * std::atan2((p - q).norm(), (p + q).norm());
}

Vector exp(const Vector& p, const Vector& v) {
  require_unit(p);
  require_tangent(p, v);
  const double n = v.norm();
  if (n == 0.0) return p;
  Vector out = std::cos(n) * p + (std::sin(n) / n) * v;
  return out / out.norm();
}

Vector log(const Vector& p, const Vector& q) {
  const double theta = dist(p, q);
  if (theta >= kPi - 1e-12) throw Error(Errc::AntipodalLog, "log of an antipodal point");
  Vector w = q - p.dot(q) * p;
  const double n = w.norm();
  if (n == 0.0) return Vector::Zero(p.size());
  return (theta / n) * w;
}

Matrix dexp_matrix(const Vector& p, const Vector& v) {
  const Eigen::Index n = p.size();
  const Matrix proj = Matrix::Identity(n, n) - p * p.transpose();
  const double theta = v.norm();
  if (theta == 0.0) return proj;
  const Vector u = v / theta;
  const Vector t = -std::sin(theta) * p + std::cos(theta) * u;
  return t * u.transpose() + sinc(theta) * (proj - u * u.transpose());
}

Vector dexp(const Vector& p, const Vector& v, const Vector& w) {
  if (v.norm() == 0.0) throw Error(Errc::ZeroBaseVector, "dexp needs a nonzero base vector");
  return dexp_matrix(p, v) * w;
}

Vector dexp_inverse(const Vector& p, const Vector& v, const Vector& y) {
  const double theta = v.norm();
  if (theta == 0.0) return project_tangent(p, y);
  if (theta >= kPi) throw Error(Errc::OutsideTIL, "dexp is singular at |v| >= pi");
  const Vector u = v / theta;
  const Vector q = exp(p, v);
  const Vector t = -std::sin(theta) * p + std::cos(theta) * u;
  const double radial = y.dot(t);
  const Vector normal = y - radial * t - y.dot(q) * q;
  return radial * u + normal / sinc(theta);
}

Vector parallel_transport(const Vector& p, const Vector& q, const Vector& v) {
  const double c = 1.0 + p.dot(q);
  if (c <= 1e-12) throw Error(Errc::AntipodalLog, "no unique geodesic between antipodes");
  return v - (q.dot(v) / c) * (p + q);
}

Vector project_tangent(const Vector& p, const Vector& v) { return v - v.dot(p) * p; }

Vector random_point(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(d + 1);
  do {
    for (int i = 0; i <= d; ++i) v(i) = normal(rng);
  } while (v.norm() < 1e-8);
  return v / v.norm();
}

Vector random_tangent(const Vector& p, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(p.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
  return project_tangent(p, v);
}

double fourth_derivative_at(const Vector& p, const Vector& W, const Vector& X, const Vector& Y,
                            double h, Curve curve) {
  require_unit(p);
  require_tangent(p, W);
  require_tangent(p, X);
  if (W.norm() >= kPi - kCutGuard) throw Error(Errc::CutLocusContact, "|W| must be below pi");
  const Vector q = exp(p, W);
  require_tangent(q, Y);
  const Vector Yp = curve == Curve::Lifted ? dexp_inverse(p, W, Y) : Vector();

  std::array<Vector, 5> first;
  std::array<Vector, 5> second;
  for (int a = 0; a < 5; ++a) {
    const double s = (a - 2) * h;
    first[a] = exp(p, s * X);
    if (curve == Curve::Lifted) {
      const Vector v = W + s * Yp;
      if (v.norm() >= kPi - kCutGuard) throw Error(Errc::CutLocusContact, "lifted curve leaves TIL_p");
      second[a] = exp(p, v);
    } else {
      second[a] = exp(q, s * Y);
    }
  }
  double sum = 0.0;
  for (int a = 0; a < 5; ++a) {
    double inner = 0.0;
    for (int b = 0; b < 5; ++b) inner += kSecond[b] * half_sq_dist(first[a], second[b]);
    sum += kSecond[a] * inner;
  }
  return sum / (h * h * h * h);
}

MtwSample cost_curvature(const Vector& p, const Vector& W, const Vector& X, const Vector& Y,
                         double step, Curve curve) {
  check_step(step);
  const double coarse = fourth_derivative_at(p, W, X, Y, step, curve);
  const double fine = fourth_derivative_at(p, W, X, Y, 0.5 * step, curve);
  MtwSample out;
  out.p = p;
  out.W = W;
  out.X = X;
  out.Y = Y;
  out.step = step;
  out.fourth_derivative = (16.0 * fine - coarse) / 15.0;
  out.S = -1.5 * out.fourth_derivative;
  return out;
}

double mtw_symmetry_residual(const Vector& p, const Vector& W, const Vector& X, const Vector& Y,
                             double step) {
  if (X.norm() == 0.0 && Y.norm() == 0.0) return 0.0;
  const Vector q = exp(p, W);
  const double forward = cost_curvature(p, W, X, Y, step).S;
  const double backward = cost_curvature(q, log(q, p), Y, X, step).S;
  return std::abs(forward - backward);
}

FirstVariation first_variation_residuals(const Vector& p, const Vector& q, const Vector& X,
                                         const Vector& Y, double step) {
  require_unit(p);
  require_unit(q);
  require_tangent(p, X);
  require_tangent(q, Y);
  const Vector W = log(p, q);
  const Vector Yp = dexp_inverse(p, W, Y);
  const double h = step;

  auto first_point = [&](int a) { return exp(p, (a * h) * X); };
  auto second_point = [&](int b) {
    const Vector v = W + (b * h) * Yp;
    if (v.norm() >= kPi - kCutGuard) throw Error(Errc::CutLocusContact, "curve leaves TIL_p");
    return exp(p, v);
  };
  // 4th order first difference, written so identical samples cancel exactly.
  auto d1 = [&](auto&& f) { return ((f(-2) - f(2)) + 8.0 * (f(1) - f(-1))) / (12.0 * h); };
  auto d2 = [&](auto&& f) {
    return ((-f(-2) - f(2)) + 16.0 * (f(-1) + f(1)) - 30.0 * f(0)) / (12.0 * h * h);
  };

  FirstVariation out;
  out.derX = d1([&](int a) { return half_sq_dist(first_point(a), q); }) + X.dot(W);
  out.derXY = d1([&](int a) {
                const Vector x = first_point(a);
                return d1([&](int b) { return half_sq_dist(x, second_point(b)); });
              }) +
              X.dot(Yp);
  out.derXYY = d1([&](int a) {
    const Vector x = first_point(a);
    return d2([&](int b) { return half_sq_dist(x, second_point(b)); });
  });
  if (X.norm() == 0.0) out = FirstVariation{};
  return out;
}

SecondUpper f_second_upper(const Vector& p, const Vector& q, const Vector& v0, const Vector& v1,
                           int samples, double step) {
  require_unit(p);
  require_unit(q);
  require_tangent(p, v0);
  require_tangent(p, v1);
  if (v0.norm() >= kPi || v1.norm() >= kPi) {
    throw Error(Errc::SegmentLeavesTIL, "segment endpoint outside the open ball of radius pi");
  }
  const Vector dir = v1 - v0;
  const double len = dir.norm();
  if (len == 0.0) throw Error(Errc::InvalidInput, "segment has zero length");
  const Vector u = dir / len;
  auto f = [&](const Vector& v) {
    const double d = dist(q, exp(p, v));
    return 0.5 * d * d;
  };
  SecondUpper out;
  out.value = -std::numeric_limits<double>::infinity();
  const int count = std::max(samples, 2);
  for (int k = 0; k < count; ++k) {
    const double tau = double(k) / double(count - 1);
    const Vector v = v0 + tau * dir;
    const double quotient = (f(v + step * u) - 2.0 * f(v) + f(v - step * u)) / (step * step);
    if (quotient > out.value) {
      out.value = quotient;
      out.at = tau;
    }
  }
  return out;
}

std::vector<SuperlevelViolation> h_superlevel_convexity(const Vector& p, const Vector& q,
                                                        const std::vector<Vector>& grid,
                                                        double threshold, double tol,
                                                        const TangentFunction& h) {
  const TangentFunction fn = h ? h : TangentFunction([&](const Vector& v) {
    const double d = dist(q, exp(p, v));
    return 0.5 * (d * d - v.squaredNorm());
  });
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = fn(grid[i]);
  std::vector<SuperlevelViolation> out;
  for (std::size_t a = 0; a < grid.size(); ++a) {
    if (!(values[a] > threshold)) continue;
    for (std::size_t b = a + 1; b < grid.size(); ++b) {
      if (!(values[b] > threshold)) continue;
      const double mid = fn(0.5 * (grid[a] + grid[b]));
      if (!(mid > threshold - tol)) out.push_back({a, b, mid});
    }
  }
  return out;
}

BipolarWitness bipolar_witness(const Vector& p, const Vector& q, const std::vector<Vector>& xs,
                               const std::vector<Vector>& ys, double tol) {
  require_unit(p);
  require_unit(q);
  for (const auto& x : xs) require_unit(x);
  for (const auto& y : ys) require_unit(y);
  const Eigen::Index n = p.size();
  const Vector W = log(p, q);
  const Matrix A = dexp_matrix(p, W);  // T_p -> T_q

  BipolarWitness out;
  out.psi1 = A.transpose();
  out.psi1_norm = Eigen::JacobiSVD<Matrix>(A).singularValues()(0);
  if (out.psi1_norm > 1.0 + 1e-12) throw Error(Errc::NotShort, "exp_p is not short at log_p q");

  const Matrix pq = Matrix::Identity(n, n) - q * q.transpose();
  Matrix rest = pq - A * A.transpose();
  rest = 0.5 * (rest + rest.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(rest);
  Vector roots = es.eigenvalues();
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    if (roots(i) < -1e-12) throw Error(Errc::NotShort, "I - psi1^T psi1 is not positive semidefinite");
    roots(i) = std::sqrt(std::max(0.0, roots(i)));
  }
  out.psi2 = es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().transpose();

  const std::size_t m = xs.size();
  const std::size_t k = m + ys.size() + 2;
  out.points = Matrix::Zero(k, 2 * n);
  std::vector<Vector> sphere_pts;
  sphere_pts.push_back(p);
  for (std::size_t i = 0; i < m; ++i) {
    out.points.row(1 + i).head(n) = log(p, xs[i]).transpose();
    sphere_pts.push_back(xs[i]);
  }
  out.points.row(1 + m).head(n) = W.transpose();
  sphere_pts.push_back(q);
  std::vector<Vector> probes;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const Vector g = log(q, ys[i]);
    out.points.row(2 + m + i).head(n) = (W + out.psi1 * g).transpose();
    out.points.row(2 + m + i).tail(n) = (out.psi2 * g).transpose();
    sphere_pts.push_back(ys[i]);
    probes.push_back(g);
  }
  for (Eigen::Index c = 0; c < n; ++c) probes.push_back(project_tangent(q, Vector::Unit(n, c)));
  for (const auto& w : probes) {
    const double image = std::sqrt((out.psi1 * w).squaredNorm() + (out.psi2 * w).squaredNorm());
    out.iota_residual = std::max(out.iota_residual, std::abs(image - w.norm()));
  }

  auto edge = [&](std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    if (a == 0) return b <= m + 1;          // p to x_i and p to q
    return a == m + 1 && b > m + 1;         // q to y_i
  };
  out.atleast_slack = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      const double model = (out.points.row(a) - out.points.row(b)).norm();
      const double target = dist(sphere_pts[a], sphere_pts[b]);
      if (edge(a, b)) {
        out.equal_error = std::max(out.equal_error, std::abs(model - target));
      } else {
        out.atleast_slack = std::min(out.atleast_slack, model - target);
      }
    }
  }
  out.ok = out.equal_error <= tol && out.atleast_slack >= -tol;
  return out;
}

FiniteMetricSpace sphere_space(const Matrix& points, std::vector<std::string> labels) {
  const Eigen::Index k = points.rows();
  if (labels.empty()) labels = default_labels(std::size_t(k));
  Matrix d = Matrix::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i + 1; j < k; ++j) {
      d(i, j) = d(j, i) = dist(points.row(i).transpose(), points.row(j).transpose());
    }
  }
  return FiniteMetricSpace::validate(d, std::move(labels), 1e-12);
}

ProbeInstance ctil_probe(const Vector& p, const Vector& u, const Vector& v, double eps, double zeta,
                         double delta) {
  require_unit(p);
  require_tangent(p, u);
  require_tangent(p, v);
  if (u.norm() >= kPi || v.norm() >= kPi) throw Error(Errc::OutsideTIL, "u and v must lie in TIL_p");
  if (!(delta > 0) || !(eps > 0) || !(zeta > 0) || eps >= 1.0) {
    throw Error(Errc::InvalidInput, "eps, zeta and delta must be positive (eps < 1)");
  }
  const Vector w = 0.5 * (u + v);
  const std::vector<std::pair<std::string, Vector>> named = {
      {"p", p},
      {"x", exp(p, u)},
      {"x'", exp(p, -delta * u)},
      {"y", exp(p, v)},
      {"y'", exp(p, -delta * v)},
      {"q'", exp(p, (1.0 - eps) * w)},
      {"z", exp(p, zeta * w)},
  };
  ComparisonTree tree = parse_tree("p/xx'yy'(q'/z)");

  std::vector<Vector> distinct;
  std::vector<std::string> labels;
  std::vector<std::size_t> point_of(named.size());
  for (std::size_t i = 0; i < named.size(); ++i) {
    std::size_t found = distinct.size();
    for (std::size_t j = 0; j < distinct.size(); ++j) {
      if (dist(distinct[j], named[i].second) <= 1e-12) {
        found = j;
        break;
      }
    }
    if (found == distinct.size()) {
      distinct.push_back(named[i].second);
      labels.push_back(named[i].first);
    }
    point_of[i] = found;
  }
  Matrix pts(distinct.size(), p.size());
  for (std::size_t i = 0; i < distinct.size(); ++i) pts.row(i) = distinct[i].transpose();

  std::vector<std::size_t> assignment(tree.size());
  for (std::size_t i = 0; i < named.size(); ++i) assignment[tree.index_of(named[i].first)] = point_of[i];
  return {sphere_space(pts, labels), std::move(tree), std::move(assignment), std::move(pts)};
}

}  // namespace treecmp::sphere
