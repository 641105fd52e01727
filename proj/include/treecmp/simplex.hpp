#pragma once

#include <cstdint>
#include <vector>

#include "treecmp/execution.hpp"
#include "treecmp/metric.hpp"

namespace treecmp::simplex {

/// Number of points k/N on the unit simplex in R^n with integer k.
std::uint64_t grid_size(int n, int resolution);

/// Largest resolution <= max_resolution whose grid fits in `budget` points.
int grid_resolution(int n, std::uint64_t budget, int max_resolution = 64);

struct GridPoint {
  double value = 0.0;
  std::vector<int> counts;  // sums to the resolution
};

/// The `keep` smallest values of s M s^T over the grid, ties broken by the
/// lexicographic order of the counts so both kernels agree exactly.
std::vector<GridPoint> grid_best(const Matrix& m, int resolution, std::size_t keep,
                                 Execution exec = Execution::Parallel);

/// Euclidean projection onto {s >= 0, sum s = 1}.
Vector project(const Vector& v);

/// Projected gradient descent from `s`; returns the final objective.
double polish(const Matrix& m, Vector& s, int max_iter = 20000);

}  // namespace treecmp::simplex
