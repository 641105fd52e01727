#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "treecmp/execution.hpp"
#include "treecmp/metric.hpp"

namespace treecmp {

struct PivotalLeaf {
  int pole = 1;       // 1 or 2
  double r = 0.0;     // edge length to its pole
  double beta = 0.0;  // angle at the pole between the leaf edge and the other pole
};

struct LeafTarget {
  std::size_t i = 0;
  std::size_t j = 0;
  double distance = 0.0;
};

/// Bipolar tree p1/x..(p2/x..) with pole distance, edge lengths and hinge
/// angles read off a geodesic tree, and the distances between its leaves.
struct GeodesicBipolarTree {
  double pole_dist = 1.0;
  std::vector<PivotalLeaf> leaves;
  std::vector<LeafTarget> targets;
  /// Optional: distance from each leaf to the pole it is not attached to.
  std::vector<double> cross_targets;

  /// Throws InvalidInput or AngleOutOfRange.
  void validate() const;
};

/// Model distance between leaves i and j when their directions make angle
/// theta. Throws AngleOutOfRange outside [0, pi].
double pivotal_distance(const GeodesicBipolarTree& tree, std::size_t i, std::size_t j,
                        double theta);

struct AlphaResult {
  bool satisfiable = true;
  double alpha = 0.0;
};

/// Smallest angle whose pivotal distance reaches the (i, j) target, by
/// bisection. A pair without a target gets alpha = 0.
AlphaResult compute_alpha(const GeodesicBipolarTree& tree, std::size_t i, std::size_t j);

/// All alphas; unsatisfiable pairs hold +infinity.
Matrix compute_alphas(const GeodesicBipolarTree& tree);

struct CorollaryCheck {
  bool pairs_ok = false;
  bool triples_ok = false;
  std::array<std::size_t, 3> worst_triple{0, 0, 0};
  double worst_triple_sum = 0.0;
};

/// alpha_ij <= pi for every pair and alpha_ij + alpha_jk + alpha_ki <= 2 pi
/// for every triple, both to 1e-12.
CorollaryCheck check_corollary(const Matrix& alphas);

struct RealizeOptions {
  int starts = 32;
  int max_iter = 20000;
  std::uint64_t seed = 0;
  Execution exec = Execution::Parallel;
};

struct RealizeResult {
  bool success = false;
  double energy = 0.0;
  double min_slack = 0.0;  // min over pairs of angle - alpha
  int best_start = 0;
  Matrix xi;               // k x dim unit rows
};

/// Minimizes sum over pairs of min(0, angle(xi_i, xi_j) - alpha_ij)^2 on a
/// product of unit spheres in R^dim by projected gradient with backtracking,
/// from `starts` random configurations. Success iff energy <= 1e-16.
RealizeResult realize_directions(const Matrix& alphas, int dim, const RealizeOptions& opts = {});

struct PivotalConfig {
  Matrix theta;   // direction angles
  Matrix xi;      // k x dim
  Matrix coords;  // rows p1, p2, leaves; R^{dim+1}
};

struct PivotalResult {
  bool success = false;
  std::string failure;  // empty on success
  Matrix alphas;
  CorollaryCheck corollary;
  RealizeResult realize;
  PivotalConfig config;
  double equal_error = 0.0;    // pole distance, edge lengths, hinge angles
  double atleast_slack = 0.0;  // min (model - target) over leaf pairs and cross pairs
};

/// Full pivotal route for trees with at most four leaves. Failures are
/// returned, not thrown.
PivotalResult pivotal_comparison(const GeodesicBipolarTree& tree, const RealizeOptions& opts = {});

struct SampledTree {
  GeodesicBipolarTree tree;
  Matrix points;  // rows p1, p2, leaves on S^d
};

/// Random geodesic bipolar tree on S^d with `first` leaves at p1 and
/// `second` at p2; hinge angles by the spherical law of cosines.
SampledTree sample_sphere_tree(int first, int second, int d, std::mt19937_64& rng);

}  // namespace treecmp
