#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "treecmp/metric.hpp"
#include "treecmp/tree.hpp"

namespace treecmp::sphere {

// Points are unit vectors in R^{d+1}; tangent vectors at p are ambient
// vectors orthogonal to p. Functions taking a point or tangent vector check
// these invariants to 1e-12 and throw NotUnit / NotTangent.

void require_unit(const Vector& p);
void require_tangent(const Vector& p, const Vector& v);

double dist(const Vector& p, const Vector& q);

Vector exp(const Vector& p, const Vector& v);

/// Throws AntipodalLog when q = -p.
Vector log(const Vector& p, const Vector& q);

/// Differential of exp_p at v applied to w; the result is tangent at exp_p(v).
/// Throws ZeroBaseVector for v = 0.
Vector dexp(const Vector& p, const Vector& v, const Vector& w);

/// Matrix of dexp(p, v, .) on ambient vectors (zero on the normal p).
/// v = 0 gives the projection onto T_p.
Matrix dexp_matrix(const Vector& p, const Vector& v);

/// Y_p with dexp(p, v, Y_p) = y, for y tangent at exp_p(v) and |v| < pi.
Vector dexp_inverse(const Vector& p, const Vector& v, const Vector& y);

Vector parallel_transport(const Vector& p, const Vector& q, const Vector& v);

/// Projection of the ambient vector v onto T_p.
Vector project_tangent(const Vector& p, const Vector& v);

/// Uniform point on S^d.
Vector random_point(int d, std::mt19937_64& rng);
/// Gaussian tangent vector at p.
Vector random_tangent(const Vector& p, std::mt19937_64& rng);

enum class Curve {
  Lifted,   // t -> exp_p(W + t Y_p), Y read in T_p through dexp
  Geodesic  // t -> exp_q(t Y)
};

struct MtwSample {
  Vector p;
  Vector W;
  Vector X;
  Vector Y;  // tangent at q = exp_p(W)
  double S = 0.0;
  double fourth_derivative = 0.0;
  double step = 0.0;
  std::uint64_t seed = 0;
};

/// Mixed derivative d^4/ds^2 dt^2 of g(s,t) = 1/2 dist(exp_p(sX), c(t))^2 at
/// the origin, c being the chosen curve through q = exp_p(W) with velocity Y.
/// Composed 5-point second differences at steps h and h/2, Richardson
/// extrapolated. S = -3/2 times the derivative.
/// Throws StepTooSmall / StepTooLarge outside (1e-4, 1e-1) and
/// CutLocusContact when a stencil point gets within 1e-6 of distance pi.
MtwSample cost_curvature(const Vector& p, const Vector& W, const Vector& X, const Vector& Y,
                         double step = 0.02, Curve curve = Curve::Lifted);

/// The plain stencil at one step, without extrapolation.
double fourth_derivative_at(const Vector& p, const Vector& W, const Vector& X, const Vector& Y,
                            double h, Curve curve = Curve::Lifted);

/// |S_{p,q}(X,Y) - S_{q,p}(Y,X)|, the second sample based at q with
/// W' = log_q p.
double mtw_symmetry_residual(const Vector& p, const Vector& W, const Vector& X, const Vector& Y,
                             double step = 0.02);

struct FirstVariation {
  double derX = 0.0;    // dc/dX + <X, W>
  double derXY = 0.0;   // d2c/dXdY + <X, Y_p>
  double derXYY = 0.0;  // d3c/dX dY dY along exp_p(W + t Y_p)
};

/// Residuals of the first variation identities at (p, q = exp_p W), with
/// X tangent at p and Y tangent at q. Fourth order central differences.
FirstVariation first_variation_residuals(const Vector& p, const Vector& q, const Vector& X,
                                         const Vector& Y, double step = 1e-3);

struct SecondUpper {
  double value = 0.0;  // largest second difference quotient
  double at = 0.0;     // segment parameter in [0, 1] where it was attained
};

/// f(v) = 1/2 dist(q, exp_p v)^2 along the segment [v0, v1], differentiated
/// along the unit direction of the segment. Throws SegmentLeavesTIL if an
/// endpoint has norm >= pi (the ball is convex, so this covers the segment).
SecondUpper f_second_upper(const Vector& p, const Vector& q, const Vector& v0, const Vector& v1,
                           int samples = 64, double step = 1e-3);

struct SuperlevelViolation {
  std::size_t a = 0;  // grid indices
  std::size_t b = 0;
  double h_mid = 0.0;
};

using TangentFunction = std::function<double(const Vector&)>;

/// h(v) = 1/2 (dist(q, exp_p v)^2 - |v|^2) unless `h` overrides it.
/// For every grid pair with h > threshold at both ends, checks
/// h(midpoint) > threshold - tol.
std::vector<SuperlevelViolation> h_superlevel_convexity(const Vector& p, const Vector& q,
                                                        const std::vector<Vector>& grid,
                                                        double threshold, double tol = 1e-12,
                                                        const TangentFunction& h = {});

struct BipolarWitness {
  Matrix points;        // rows: p, x_1..x_m, q, y_1..y_n in R^{2(d+1)}
  Matrix psi1;          // T_q -> T_p, ambient (d+1) x (d+1)
  Matrix psi2;          // T_q -> T_q, ambient (d+1) x (d+1)
  double psi1_norm = 0.0;
  double iota_residual = 0.0;  // max | |(psi1 w, psi2 w)| - |w| | over sampled w
  double equal_error = 0.0;    // worst |model - target| on tree edges
  double atleast_slack = 0.0;  // min (model - target) over non-edges
  bool ok = false;
};

/// Model configuration for the bipolar tree p/x_1..x_m(q/y_1..y_n).
/// Throws NotShort if |psi1| > 1 + 1e-12, AntipodalLog on cut-locus pairs.
BipolarWitness bipolar_witness(const Vector& p, const Vector& q, const std::vector<Vector>& xs,
                               const std::vector<Vector>& ys, double tol = 1e-8);

struct ProbeInstance {
  FiniteMetricSpace space;       // distinct points only
  ComparisonTree tree;           // p/xx'yy'(q'/z)
  std::vector<std::size_t> assignment;  // tree vertex -> point
  Matrix points;                 // one row per distinct point
};

/// Seven-point probe x = exp_p u, x' = exp_p(-delta u), y = exp_p v,
/// y' = exp_p(-delta v), q' = exp_p((1-eps) w), z = exp_p(zeta w), w = (u+v)/2.
/// Coinciding points are merged through the assignment.
ProbeInstance ctil_probe(const Vector& p, const Vector& u, const Vector& v, double eps,
                         double zeta, double delta);

/// Geodesic distance matrix of unit rows.
FiniteMetricSpace sphere_space(const Matrix& points, std::vector<std::string> labels = {});

}  // namespace treecmp::sphere
