#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "treecmp/metric.hpp"
#include "treecmp/tree.hpp"

namespace treecmp {

enum class Geometry { Euclidean, Spherical };
enum class Status { Feasible, Infeasible, Undecided };

const char* to_string(Geometry g) noexcept;
const char* to_string(Status s) noexcept;

struct PairTarget {
  std::size_t i = 0;
  std::size_t j = 0;
  double distance = 0.0;  // model units; radians for Spherical
  Relation relation = Relation::Free;
};

/// Comparison instance over Gram matrices of k model points.
///
/// Targets hold every pair i < j in lexicographic order; this order is also
/// the fixed projection order used by the solver.
struct GramProblem {
  std::size_t k = 0;
  Geometry geometry = Geometry::Euclidean;
  std::vector<PairTarget> targets;

  static GramProblem from_constraints(const ConstraintGraph& graph, const FiniteMetricSpace& space,
                                      Geometry geometry = Geometry::Euclidean);

  /// Throws InvalidProblem, or DistanceOutOfRange for a Spherical target
  /// outside (0, pi).
  void validate() const;

  const PairTarget& target(std::size_t i, std::size_t j) const;
};

struct SolveOptions {
  double feas_tol = 1e-9;
  double infeas_tol = 1e-7;
  std::size_t max_iter = 200000;
  std::uint64_t seed = 0;
};

/// Outcome of a feasibility run.
///
/// Violations are measured in squared distance divided by the mean squared
/// target (Euclidean) or in radians (Spherical), so verdicts do not depend on
/// the overall scale of the instance. `gap` is the Frobenius distance between
/// the last PSD iterate and the last constraint-set iterate in the same units.
/// Feasible always comes with verified coordinates. Infeasible comes with a
/// dual certificate whose distance bound `gap_bound` exceeds infeas_tol.
struct Certificate {
  Status status = Status::Undecided;
  Matrix coordinates;  // k x k witness, Feasible only
  double max_violation = 0.0;
  double gap = 0.0;
  double gap_bound = 0.0;  // certified lower bound on the gap, Infeasible only
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
};

/// Dykstra alternating projections between the PSD cone and the polyhedron of
/// pairwise constraints. Dispatches on problem.geometry.
Certificate solve(const GramProblem& problem, const SolveOptions& opts = {});

/// Same, over unit-diagonal (cosine) Gram matrices. Requires Spherical.
Certificate spherical_solve(const GramProblem& problem, const SolveOptions& opts = {});

/// Like solve, but first tries `start` (one row per point, any number of
/// columns) as a witness, refining it locally, and otherwise starts the
/// projections from its Gram matrix.
Certificate solve_from(const GramProblem& problem, const Matrix& start,
                       const SolveOptions& opts = {});

struct CertificateCheck {
  bool ok = false;
  std::pair<std::size_t, std::size_t> worst_pair{0, 0};
  double worst_violation = 0.0;
};

/// Recomputes model distances from `coordinates` (rows are points) and checks
/// every relation using the units documented on Certificate. Spherical rows
/// are normalized before measuring angles.
CertificateCheck verify_certificate(const GramProblem& problem, const Matrix& coordinates,
                                    double tol);

struct PlantedInstance {
  FiniteMetricSpace space;
  std::vector<std::size_t> assignment;  // vertex -> point
  Matrix points;                        // the planted witness, one row per point
};

/// Gaussian points in R^ambient_dim, one per tree vertex.
PlantedInstance plant_feasible(const ComparisonTree& tree, int ambient_dim, std::uint64_t seed);

}  // namespace treecmp
