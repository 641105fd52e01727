#include "treecmp/pentagon.hpp"

#include <cmath>
#include <numbers>

#include "treecmp/tree.hpp"

namespace treecmp {

FiniteMetricSpace pentagon_space(double eps, double delta) {
  if (!(eps >= 0) || !(delta >= 0) || !std::isfinite(eps) || !std::isfinite(delta)) {
    throw Error(Errc::InvalidInput, "eps and delta must be finite and >= 0");
  }
  const double pi = std::numbers::pi;
  const double radius = 1.0 / (2.0 * std::sin(2.0 * pi / 5.0));
  Matrix pts(6, 2);
  pts.row(0) << 0.0, 0.0;
  for (int k = 0; k < 5; ++k) {
    const double a = pi / 2.0 + 2.0 * pi * k / 5.0;
    pts.row(k + 1) << radius * std::cos(a), radius * std::sin(a);
  }
  Matrix d = pairwise_distances(pts);
  for (int a = 0; a < 5; ++a) {
    for (int b = 0; b < 5; ++b) {
      if (a == b) continue;
      const int step = (a - b + 5) % 5;
      d(a + 1, b + 1) += (step == 1 || step == 4) ? -delta : eps;
    }
  }
  try {
    return FiniteMetricSpace::validate(d, {"o", "a", "b", "c", "d", "e"});
  } catch (const Error& e) {
    throw Error(Errc::NotAMetric, "perturbation (eps=" + std::to_string(eps) +
                                      ", delta=" + std::to_string(delta) +
                                      ") is not a metric: " + e.what());
  }
}

PentagonReport pentagon_report(double eps, double delta, const SolveOptions& opts) {
  const FiniteMetricSpace space = pentagon_space(eps, delta);
  PentagonReport out;
  out.eps = eps;
  out.delta = delta;
  out.matrix_inequality_all_poles = true;
  for (std::size_t p = 0; p < space.size(); ++p) {
    const auto r = matrix_inequality_check(centered_matrix(space, p));
    out.pole_minima.push_back(r.min_value);
    if (r.min_value < -1e-12) out.matrix_inequality_all_poles = false;
  }
  const ComparisonTree tree = parse_tree("o/abcde");
  std::map<std::string, std::size_t> assignment;
  for (std::size_t v = 0; v < tree.size(); ++v) assignment[tree.label(v)] = space.index_of(tree.label(v));
  const auto problem = GramProblem::from_constraints(tree_to_constraints(tree, assignment), space);
  out.comparison = solve(problem, opts);
  out.counterexample = out.matrix_inequality_all_poles &&
                       out.comparison.status == Status::Infeasible &&
                       out.comparison.gap > opts.infeas_tol;
  return out;
}

PentagonSearch pentagon_grid_search(const std::vector<double>& eps_values,
                                    const std::vector<double>& ratios, const SolveOptions& opts,
                                    Execution exec) {
  PentagonSearch out;
  const int n = int(eps_values.size() * ratios.size());
  out.entries.resize(n);
  auto one = [&](int i) {
    const double eps = eps_values[i / ratios.size()];
    const double delta = eps * ratios[i % ratios.size()];
    try {
      return pentagon_report(eps, delta, opts);
    } catch (const Error&) {
      // Not a metric: recorded with an empty pole list.
      PentagonReport r;
      r.eps = eps;
      r.delta = delta;
      return r;
    }
  };
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < n; ++i) out.entries[i] = one(i);
  } else {
    for (int i = 0; i < n; ++i) out.entries[i] = one(i);
  }
  for (int i = 0; i < n; ++i) {
    if (out.entries[i].counterexample) {
      out.found = std::size_t(i);
      break;
    }
  }
  return out;
}

}  // namespace treecmp
