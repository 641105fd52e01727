// End-to-end acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "treecmp/batch.hpp"
#include "treecmp/corpus.hpp"
#include "treecmp/metric.hpp"
#include "treecmp/pentagon.hpp"
#include "treecmp/solver.hpp"
#include "treecmp/sphere.hpp"
#include "treecmp/tree.hpp"

using namespace treecmp;
namespace sp = treecmp::sphere;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ComparisonTree random_tree(std::size_t n, std::mt19937_64& rng) {
  std::vector<ComparisonTree::Edge> edges;
  for (std::size_t v = 1; v < n; ++v) edges.emplace_back(std::size_t(rng() % v), v);
  std::vector<std::string> labels;
  for (std::size_t v = 0; v < n; ++v) labels.push_back(std::string(1, char('a' + v)));
  return ComparisonTree::from_edges(n, edges, labels);
}

ComparisonTree star(std::size_t n) {
  std::vector<ComparisonTree::Edge> edges;
  for (std::size_t v = 1; v < n; ++v) edges.emplace_back(0, v);
  return ComparisonTree::from_edges(n, edges);
}

std::vector<std::size_t> identity(std::size_t n) {
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

FiniteMetricSpace uniform_metric(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(1.0, 2.0);
  Matrix d = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d(i, j) = d(j, i) = unif(rng);
  }
  return FiniteMetricSpace::validate(d, default_labels(n));
}

FiniteMetricSpace point_metric(std::size_t n, int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix pts(n, dim);
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    for (Eigen::Index j = 0; j < pts.cols(); ++j) pts(i, j) = g(rng);
  }
  return FiniteMetricSpace::validate(pairwise_distances(pts), default_labels(n));
}

FiniteMetricSpace sphere_metric(std::size_t n, std::mt19937_64& rng) {
  Matrix pts(n, 3);
  for (std::size_t i = 0; i < n; ++i) pts.row(Eigen::Index(i)) = sp::random_point(2, rng).transpose();
  return sp::sphere_space(pts);
}

Vector tangent_of_norm(const Vector& p, double r, std::mt19937_64& rng) {
  const Vector v = sp::random_tangent(p, rng);
  return v * (r / v.norm());
}

GramProblem all_equal(const FiniteMetricSpace& space) {
  GramProblem prob;
  prob.k = space.size();
  for (std::size_t i = 0; i < prob.k; ++i) {
    for (std::size_t j = i + 1; j < prob.k; ++j) {
      prob.targets.push_back({i, j, space(i, j), Relation::Equal});
    }
  }
  return prob;
}

Outcome parser_round_trip() {
  std::mt19937_64 rng(101);
  std::size_t encodings = 0;
  std::size_t bad = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto tree = random_tree(2 + std::size_t(trial) % 11, rng);
    for (std::size_t root = 0; root < tree.size(); ++root) {
      ++encodings;
      if (!tree_isomorphic(tree, parse_tree(format_tree(tree, root)), true)) ++bad;
    }
  }
  const auto a = parse_tree("p/xy(q/vw)");
  bool notations = tree_isomorphic(a, parse_tree("q/vw(p/xy)"), true) &&
                   tree_isomorphic(a, parse_tree("x/(p/y(q/vw))"), true);
  for (const char* shape : {"2(2)", "(1(2))"}) {
    notations = notations && tree_isomorphic(a, parse_tree(shape), false);
  }
  notations = notations && !tree_isomorphic(a, parse_tree("3(1)"), false);
  return {bad == 0 && notations,
          fmt("%zu encodings, %zu mismatches, notations %s", encodings, bad,
              notations ? "agree" : "disagree")};
}

Outcome solver_oracle() {
  std::mt19937_64 rng(202);
  int planted = 0;
  int planted_bad = 0;
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    ComparisonTree tree = random_tree(3 + std::size_t(t) % 6, rng).unlabeled();
    for (const auto& rec : batch::planted(tree, 3, std::uint64_t(20 * t), 20)) {
      ++planted;
      worst = std::max(worst, rec.max_violation);
      if (rec.status != Status::Feasible || rec.max_violation > 1e-9) ++planted_bad;
    }
  }
  int agree = 0;
  int total = 0;
  int embeddable = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 3 + std::size_t(trial) % 3;
    const auto space = trial % 2 ? uniform_metric(n, rng) : point_metric(n, 1 + trial % 4, rng);
    const bool oracle = euclidean_embed(space, 0).embeddable;
    const auto cert = solve(all_equal(space));
    embeddable += oracle;
    ++total;
    agree += cert.status == (oracle ? Status::Feasible : Status::Infeasible);
  }
  return {planted_bad == 0 && agree == total,
          fmt("planted %d/%d feasible (worst violation %.2e); all-Equal %d/%d agree (%d embeddable)",
              planted - planted_bad, planted, worst, agree, total, embeddable)};
}

Outcome necessity_chain() {
  std::mt19937_64 rng(303);
  int feasible = 0;
  int broken = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 4 + std::size_t(trial) % 4;
    const auto space = trial % 3 == 0   ? uniform_metric(n, rng)
                       : trial % 3 == 1 ? sphere_metric(n, rng)
                                        : point_metric(n, 2 + trial % 3, rng);
    const auto cert = solve(GramProblem::from_constraints(tree_to_constraints(star(n), identity(n)), space));
    if (cert.status != Status::Feasible) continue;
    ++feasible;
    if (!matrix_inequality_check(centered_matrix(space, 0)).holds) ++broken;
  }
  return {broken == 0 && feasible > 0,
          fmt("500 instances, %d Feasible, %d with a failing matrix inequality", feasible, broken)};
}

Outcome tripod() {
  Matrix d(4, 4);
  d << 0, 1, 1, 1, 1, 0, 2, 2, 1, 2, 0, 2, 1, 2, 2, 0;
  const auto space = FiniteMetricSpace::validate(d, {"p", "x", "y", "z"});
  const auto mi = matrix_inequality_check(centered_matrix(space, 0));
  const double bary = (mi.argmin - Vector::Constant(3, 1.0 / 3.0)).cwiseAbs().maxCoeff();
  const auto cert = solve(GramProblem::from_constraints(tree_to_constraints(star(4), identity(4)), space));
  const bool ok = std::abs(mi.min_value + 1.0 / 3.0) <= 1e-9 && bary <= 1e-6 &&
                  cert.status == Status::Infeasible && cert.gap > 1e-7;
  return {ok, fmt("minimum %.12f at distance %.1e from the barycenter; %s, gap %.3e, bound %.3e",
                  mi.min_value, bary, to_string(cert.status), cert.gap, cert.gap_bound)};
}

Outcome pentagon() {
  const auto search = pentagon_grid_search({1e-6, 1e-5, 1e-4, 1e-3}, {10, 100, 1000});
  int found = 0;
  for (const auto& e : search.entries) {
    double lowest = 0.0;
    for (double m : e.pole_minima) lowest = std::min(lowest, m);
    if (lowest >= -1e-12 && e.comparison.status == Status::Infeasible) ++found;
  }
  const auto literal = pentagon_report(1e-9, 1e-6);
  double lowest = 0.0;
  for (double m : literal.pole_minima) lowest = std::min(lowest, m);
  return {found > 0 && literal.matrix_inequality_all_poles,
          fmt("grid: %d of %zu pairs are counterexamples; literal (1e-9, 1e-6): inequality min %.2e, "
              "comparison %s with violation %.1e, below the resolution of feas_tol 1e-9 after squaring",
              found, search.entries.size(), lowest, to_string(literal.comparison.status),
              literal.comparison.max_violation)};
}

Outcome sphere_samples() {
  std::string detail;
  bool ok = true;
  for (const char* shape : {"3(1)", "2(2)", "4(1)"}) {
    const auto recs = batch::sphere_sample(parse_tree(shape), 2, Geometry::Euclidean, 1, 100);
    int feas = 0;
    int infeas = 0;
    int model = 0;
    for (const auto& r : recs) {
      feas += r.status == Status::Feasible;
      infeas += r.status == Status::Infeasible;
      model += r.from_model;
    }
    const int undecided = 100 - feas - infeas;
    ok = ok && infeas == 0 && undecided < 1;
    detail += fmt("%s %d/100 (%d from the model start, %d undecided); ", shape, feas, model, undecided);
  }
  const auto recs = batch::sphere_sample(parse_tree("2(2)"), 2, Geometry::Spherical, 1, 100);
  int feas = 0;
  int infeas = 0;
  for (const auto& r : recs) {
    feas += r.status == Status::Feasible;
    infeas += r.status == Status::Infeasible;
  }
  ok = ok && infeas == 0 && 100 - feas - infeas < 1;
  detail += fmt("spherical 2(2) %d/100", feas);
  return {ok, detail};
}

Outcome mtw() {
  std::mt19937_64 rng(707);
  double worst_s = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Vector p = sp::random_point(2, rng);
    const Vector x = sp::random_tangent(p, rng).normalized();
    Vector y = sp::random_tangent(p, rng);
    y = (y - y.dot(x) * x).normalized();
    const double s = sp::cost_curvature(p, Vector::Zero(3), x, y).S;
    worst_s = std::max(worst_s, std::abs(s - 1.0));
  }
  const auto recs = batch::mtw_scan(1, 200, 0.02);
  int errors = 0;
  double top = -1e300;
  double sym = 0.0;
  for (const auto& r : recs) {
    if (!r.error.empty()) {
      ++errors;
      continue;
    }
    top = std::max(top, r.sample.fourth_derivative);
    sym = std::max(sym, sp::mtw_symmetry_residual(r.sample.p, r.sample.W, r.sample.X, r.sample.Y));
  }
  return {worst_s <= 5e-3 && errors == 0 && top <= 1e-3 && sym <= 1e-2,
          fmt("|S - 1| <= %.2e at W = 0; 200 samples, %d errors, max fourth derivative %.3e, "
              "symmetry residual %.2e",
              worst_s, errors, top, sym)};
}

Outcome f_second() {
  std::mt19937_64 rng(808);
  double top = -1e300;
  for (int i = 0; i < 200; ++i) {
    const Vector p = sp::random_point(2, rng);
    const Vector q = sp::exp(p, tangent_of_norm(p, 3.0 * std::uniform_real_distribution<double>()(rng), rng));
    std::uniform_real_distribution<double> r(0.0, pi - 0.05);
    const Vector v0 = tangent_of_norm(p, r(rng), rng);
    const Vector v1 = tangent_of_norm(p, r(rng), rng);
    top = std::max(top, sp::f_second_upper(p, q, v0, v1).value);
  }
  double radial = 0.0;
  double same = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Vector p = sp::random_point(2, rng);
    const Vector vstar = tangent_of_norm(p, 0.3 + 2.0 * double(i) / 20.0, rng);
    const Vector q = sp::exp(p, vstar);
    radial = std::max(radial, std::abs(sp::f_second_upper(p, q, 0.5 * vstar, 1.2 * vstar).value - 1.0));
    const Vector a = tangent_of_norm(p, 1.5, rng);
    const Vector b = tangent_of_norm(p, 1.5, rng);
    same = std::max(same, std::abs(sp::f_second_upper(p, p, a, b).value - 1.0));
  }
  return {top <= 1 + 1e-3 && radial <= 1e-4 && same <= 1e-6,
          fmt("max quotient %.6f over 200 segments; radial |f'' - 1| %.1e; p = q |f'' - 1| %.1e", top,
              radial, same)};
}

Outcome first_variation() {
  std::mt19937_64 rng(909);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Vector p = sp::random_point(2, rng);
    const Vector q = sp::exp(p, tangent_of_norm(p, 0.1 + 2.8 * double(i) / 100.0, rng));
    const auto r = sp::first_variation_residuals(p, q, sp::random_tangent(p, rng).normalized(),
                                                 sp::random_tangent(q, rng).normalized());
    worst = std::max({worst, std::abs(r.derX), std::abs(r.derXY), std::abs(r.derXYY)});
  }
  return {worst <= 1e-3, fmt("worst residual %.2e over 100 samples", worst)};
}

Outcome bipolar() {
  std::mt19937_64 rng(1010);
  double equal = 0.0;
  double slack = 1e300;
  double iota = 0.0;
  int wrong_dim = 0;
  int failures = 0;
  for (auto [m, n] : {std::pair{4, 1}, std::pair{2, 3}}) {
    for (int i = 0; i < 100; ++i) {
      const Vector p = sp::random_point(2, rng);
      const Vector q = sp::random_point(2, rng);
      std::vector<Vector> xs;
      std::vector<Vector> ys;
      for (int k = 0; k < m; ++k) xs.push_back(sp::random_point(2, rng));
      for (int k = 0; k < n; ++k) ys.push_back(sp::random_point(2, rng));
      try {
        const auto w = sp::bipolar_witness(p, q, xs, ys);
        wrong_dim += w.points.cols() != 6;
        equal = std::max(equal, w.equal_error);
        slack = std::min(slack, w.atleast_slack);
        iota = std::max(iota, w.iota_residual);
      } catch (const Error&) {
        ++failures;
      }
    }
  }
  return {failures == 0 && wrong_dim == 0 && equal <= 1e-8 && slack >= -1e-12 && iota <= 1e-10,
          fmt("200 witnesses in R^6, %d failures; equal error %.1e, min slack %.2e, iota residual %.1e",
              failures, equal, slack, iota)};
}

Outcome pivotal() {
  int ok = 0;
  int total = 0;
  double alpha = 0.0;
  double triple = 0.0;
  std::string first_failure;
  for (auto [m, n] : {std::pair{2, 2}, std::pair{3, 1}}) {
    for (const auto& r : batch::pivotal(m, n, 1, 100)) {
      ++total;
      alpha = std::max(alpha, r.max_alpha);
      triple = std::max(triple, r.worst_triple_sum);
      if (r.success && r.max_alpha <= pi + 1e-12 && r.worst_triple_sum <= 2 * pi + 1e-12) {
        ++ok;
      } else if (first_failure.empty()) {
        first_failure = r.failure;
      }
    }
  }
  return {ok == total, fmt("%d/%d verified; max alpha %.4f, max triple sum %.4f%s%s", ok, total, alpha,
                           triple, first_failure.empty() ? "" : "; first failure: ",
                           first_failure.c_str())};
}

std::string dump(const corpus::RunSummary& run) {
  std::ostringstream out;
  for (const auto& r : run.records) out << r.dump() << '\n';
  out << run.summary.dump() << '\n';
  return out.str();
}

Outcome determinism() {
  const auto instances = corpus::load_corpus(TREECMP_CORPUS_DIR);
  const SolveOptions opts;
  const auto a = dump(corpus::run_corpus(instances, opts));
  const auto b = dump(corpus::run_corpus(instances, opts));
  const auto c = dump(corpus::run_corpus(instances, opts, Execution::Serial));
  return {a == b && a == c, fmt("%zu instances, %zu bytes; repeat %s, serial %s", instances.size(),
                                a.size(), a == b ? "identical" : "differs",
                                a == c ? "identical" : "differs")};
}

struct Criterion {
  const char* name;
  double limit;  // seconds
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"parser round trip", 1, parser_round_trip},
      {"solver soundness and embedding oracle", 60, solver_oracle},
      {"feasible implies matrix inequality", 60, necessity_chain},
      {"equilateral tripod", 5, tripod},
      {"pentagon counterexample", 120, pentagon},
      {"sphere samples satisfy comparisons", 120, sphere_samples},
      {"cost curvature on the sphere", 60, mtw},
      {"second derivative bound", 30, f_second},
      {"first variation identities", 30, first_variation},
      {"bipolar model witness", 60, bipolar},
      {"pivotal construction", 120, pivotal},
      {"corpus run determinism", 120, determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = out.pass && secs <= c.limit;
    failed += !pass;
    std::printf("%s %2zu %s: %s [%.2f s, limit %.0f s]\n", pass ? "PASS" : "FAIL", i + 1, c.name,
                out.detail.c_str(), secs, c.limit);
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - std::size_t(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
