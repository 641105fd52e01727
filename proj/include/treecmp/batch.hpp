#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "treecmp/execution.hpp"
#include "treecmp/pivotal.hpp"
#include "treecmp/solver.hpp"
#include "treecmp/sphere.hpp"
#include "treecmp/tree.hpp"

// Seed-indexed batch runners. Each record depends only on its own seed, so
// the OpenMP kernel and the serial loop produce identical vectors, ordered by
// seed.

namespace treecmp::batch {

struct MtwRecord {
  sphere::MtwSample sample;
  std::string error;  // CutLocusContact and friends; empty on success
};

/// Per seed: p uniform on S^d, |W| uniform in [0, max_w], X and Y unit.
std::vector<MtwRecord> mtw_scan(std::uint64_t first_seed, int count, double step, int d = 2,
                                double max_w = 1.0, Execution exec = Execution::Parallel);

struct SolveRecord {
  std::uint64_t seed = 0;
  Status status = Status::Undecided;
  double max_violation = 0.0;
  double gap = 0.0;
  std::size_t iterations = 0;
  bool from_model = false;  // decided from the bipolar model configuration
};

/// Samples tree.size() points on S^d, one per vertex, and decides the tree
/// comparison for their geodesic distances in the chosen model geometry.
/// Euclidean runs the solver doesn't decide are retried from the bipolar
/// model configuration when the tree has two adjacent internal vertices.
std::vector<SolveRecord> sphere_sample(const ComparisonTree& tree, int d, Geometry geometry,
                                       std::uint64_t first_seed, int count,
                                       const SolveOptions& opts = {},
                                       Execution exec = Execution::Parallel);

/// Gaussian points in R^dim, one per vertex; feasible by construction.
std::vector<SolveRecord> planted(const ComparisonTree& tree, int dim, std::uint64_t first_seed,
                                 int count, const SolveOptions& opts = {},
                                 Execution exec = Execution::Parallel);

struct PivotalRecord {
  std::uint64_t seed = 0;
  bool success = false;
  std::string failure;
  double max_alpha = 0.0;
  double worst_triple_sum = 0.0;
  double energy = 0.0;
  double equal_error = 0.0;
  double atleast_slack = 0.0;
};

/// Sphere-sampled bipolar trees with `first` and `second` leaves.
std::vector<PivotalRecord> pivotal(int first, int second, std::uint64_t first_seed, int count,
                                   int d = 2, Execution exec = Execution::Parallel);

}  // namespace treecmp::batch
