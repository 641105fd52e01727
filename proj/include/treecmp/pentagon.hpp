#pragma once

#include <optional>
#include <vector>

#include "treecmp/execution.hpp"
#include "treecmp/metric.hpp"
#include "treecmp/solver.hpp"

namespace treecmp {

/// Center "o" plus a regular pentagon "a".."e" with diagonal 1. Sides are
/// shortened by delta, diagonals lengthened by eps, center distances kept.
/// Throws NotAMetric when the perturbation breaks the triangle inequality.
FiniteMetricSpace pentagon_space(double eps, double delta);

struct PentagonReport {
  double eps = 0.0;
  double delta = 0.0;
  std::vector<double> pole_minima;  // matrix inequality minimum at each point
  bool matrix_inequality_all_poles = false;
  Certificate comparison;           // o/abcde at the center
  bool counterexample = false;      // inequality everywhere, comparison Infeasible
};

PentagonReport pentagon_report(double eps, double delta, const SolveOptions& opts = {});

struct PentagonSearch {
  std::vector<PentagonReport> entries;  // eps-major order
  std::optional<std::size_t> found;     // first counterexample entry
};

/// Every eps in `eps_values` against delta = ratio * eps for every ratio.
PentagonSearch pentagon_grid_search(const std::vector<double>& eps_values,
                                    const std::vector<double>& ratios,
                                    const SolveOptions& opts = {},
                                    Execution exec = Execution::Parallel);

}  // namespace treecmp
