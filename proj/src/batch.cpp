#include "treecmp/batch.hpp"

#include <optional>
#include <random>

namespace treecmp::batch {

namespace {

template <class Record, class Fn>
std::vector<Record> run(int count, Execution exec, Fn&& fn) {
  std::vector<Record> out(std::max(count, 0));
  const int n = int(out.size());
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < n; ++i) out[i] = fn(i);
  } else {
    for (int i = 0; i < n; ++i) out[i] = fn(i);
  }
  return out;
}

SolveRecord record_of(std::uint64_t seed, const Certificate& c) {
  return {seed, c.status, c.max_violation, c.gap, c.iterations, false};
}

// Bipolar model configuration for a tree with exactly two adjacent internal
// vertices, rows in vertex order.
std::optional<Matrix> bipolar_start(const ComparisonTree& tree, const Matrix& pts) {
  const auto poles = tree.poles();
  if (poles.size() != 2 || !tree.adjacent(poles[0], poles[1])) return std::nullopt;
  const std::size_t p = poles[0];
  const std::size_t q = poles[1];
  std::vector<std::size_t> order;
  std::vector<Vector> xs;
  std::vector<Vector> ys;
  order.push_back(p);
  for (std::size_t v : tree.neighbors(p)) {
    if (v == q) continue;
    order.push_back(v);
    xs.push_back(pts.row(v).transpose());
  }
  order.push_back(q);
  for (std::size_t v : tree.neighbors(q)) {
    if (v == p) continue;
    order.push_back(v);
    ys.push_back(pts.row(v).transpose());
  }
  try {
    const auto w = sphere::bipolar_witness(pts.row(p).transpose(), pts.row(q).transpose(), xs, ys);
    const std::size_t n = tree.size();
    Matrix out(n, w.points.cols());
    for (std::size_t r = 0; r < n; ++r) out.row(order[r]) = w.points.row(r);
    return out;
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

std::vector<MtwRecord> mtw_scan(std::uint64_t first_seed, int count, double step, int d,
                                double max_w, Execution exec) {
  return run<MtwRecord>(count, exec, [&](int i) {
    const std::uint64_t seed = first_seed + std::uint64_t(i);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Vector p = sphere::random_point(d, rng);
    Vector W = sphere::random_tangent(p, rng);
    W *= max_w * unit(rng) / W.norm();
    Vector X = sphere::random_tangent(p, rng);
    X /= X.norm();
    const Vector q = sphere::exp(p, W);
    Vector Y = sphere::random_tangent(q, rng);
    Y /= Y.norm();
    MtwRecord rec;
    try {
      rec.sample = sphere::cost_curvature(p, W, X, Y, step);
    } catch (const Error& e) {
      rec.sample.p = p;
      rec.sample.W = W;
      rec.sample.X = X;
      rec.sample.Y = Y;
      rec.sample.step = step;
      rec.error = to_string(e.code());
    }
    rec.sample.seed = seed;
    return rec;
  });
}

std::vector<SolveRecord> sphere_sample(const ComparisonTree& tree, int d, Geometry geometry,
                                       std::uint64_t first_seed, int count,
                                       const SolveOptions& opts, Execution exec) {
  const std::size_t n = tree.size();
  std::vector<std::size_t> identity(n);
  for (std::size_t v = 0; v < n; ++v) identity[v] = v;
  const ConstraintGraph graph = tree_to_constraints(tree, identity);
  return run<SolveRecord>(count, exec, [&](int i) {
    const std::uint64_t seed = first_seed + std::uint64_t(i);
    std::mt19937_64 rng(seed);
    Matrix pts(n, d + 1);
    for (std::size_t v = 0; v < n; ++v) pts.row(v) = sphere::random_point(d, rng).transpose();
    const FiniteMetricSpace space = sphere::sphere_space(pts);
    SolveOptions o = opts;
    o.seed = seed;
    const GramProblem problem = GramProblem::from_constraints(graph, space, geometry);
    SolveRecord rec = record_of(seed, solve(problem, o));
    if (rec.status != Status::Feasible && geometry == Geometry::Euclidean) {
      if (const auto start = bipolar_start(tree, pts)) {
        const Certificate c = solve_from(problem, *start, o);
        if (c.status != Status::Undecided) {
          rec = record_of(seed, c);
          rec.from_model = true;
        }
      }
    }
    return rec;
  });
}

std::vector<SolveRecord> planted(const ComparisonTree& tree, int dim, std::uint64_t first_seed,
                                 int count, const SolveOptions& opts, Execution exec) {
  return run<SolveRecord>(count, exec, [&](int i) {
    const std::uint64_t seed = first_seed + std::uint64_t(i);
    const PlantedInstance inst = plant_feasible(tree, dim, seed);
    SolveOptions o = opts;
    o.seed = seed;
    const ConstraintGraph graph = tree_to_constraints(tree, inst.assignment);
    return record_of(seed, solve(GramProblem::from_constraints(graph, inst.space), o));
  });
}

std::vector<PivotalRecord> pivotal(int first, int second, std::uint64_t first_seed, int count,
                                   int d, Execution exec) {
  return run<PivotalRecord>(count, exec, [&](int i) {
    const std::uint64_t seed = first_seed + std::uint64_t(i);
    std::mt19937_64 rng(seed);
    const SampledTree st = sample_sphere_tree(first, second, d, rng);
    RealizeOptions ro;
    ro.seed = seed;
    ro.exec = Execution::Serial;
    const PivotalResult r = pivotal_comparison(st.tree, ro);
    PivotalRecord rec;
    rec.seed = seed;
    rec.success = r.success;
    rec.failure = r.failure;
    rec.max_alpha = r.alphas.size() ? r.alphas.maxCoeff() : 0.0;
    rec.worst_triple_sum = r.corollary.worst_triple_sum;
    rec.energy = r.realize.energy;
    rec.equal_error = r.equal_error;
    rec.atleast_slack = r.atleast_slack;
    return rec;
  });
}

}  // namespace treecmp::batch
