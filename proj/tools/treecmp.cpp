#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <regex>

#include "treecmp/corpus.hpp"
#include "treecmp/report.hpp"

using treecmp::report::Json;

namespace {

// sysexits-style codes for everything that is not a verdict
constexpr int kUsage = 64;
constexpr int kDataErr = 65;
constexpr int kNoInput = 66;
constexpr int kCantCreate = 73;

struct Failure {
  int code;
  std::string message;
};

struct Globals {
  std::uint64_t seed = 0;
  double tol = 1e-9;
  std::size_t max_iter = 200000;
  std::string out;

  treecmp::SolveOptions solve_options() const {
    treecmp::SolveOptions o;
    o.feas_tol = tol;
    o.max_iter = max_iter;
    o.seed = seed;
    return o;
  }
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw Failure{kCantCreate, "output: cannot open '" + path + "'"};
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void line(const Json& j) { stream() << j.dump() << '\n'; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

// Runs `fn`, tagging library errors with the stage they came from.
template <class Fn>
auto stage(const std::string& name, int code, Fn&& fn) {
  try {
    return fn();
  } catch (const treecmp::Error& e) {
    throw Failure{code, name + ": " + treecmp::to_string(e.code()) + ": " + e.what()};
  }
}

std::pair<int, int> parse_shape(const std::string& s) {
  static const std::regex shape(R"(\s*(\d+)\s*\(\s*(\d+)\s*\)\s*)");
  std::smatch m;
  if (!std::regex_match(s, m, shape)) throw Failure{kUsage, "tree: expected a shape like 2(2), got '" + s + "'"};
  return {std::stoi(m[1]), std::stoi(m[2])};
}

treecmp::Geometry parse_geometry(const std::string& s) {
  if (s == "euclidean") return treecmp::Geometry::Euclidean;
  if (s == "spherical") return treecmp::Geometry::Spherical;
  throw Failure{kUsage, "geometry: expected euclidean or spherical, got '" + s + "'"};
}

int exit_for(treecmp::Status s) {
  switch (s) {
    case treecmp::Status::Feasible:
      return 0;
    case treecmp::Status::Infeasible:
      return 1;
    case treecmp::Status::Undecided:
      return 2;
  }
  return 2;
}

int cmd_check(const Globals& g, const std::string& metric_file, const std::string& notation,
              const std::vector<std::string>& assign, const std::string& geometry) {
  if (!std::ifstream(metric_file)) throw Failure{kNoInput, "read metric: cannot open '" + metric_file + "'"};
  const auto space = stage("read metric", kDataErr, [&] { return treecmp::read_metric_file(metric_file); });
  treecmp::corpus::Instance inst;
  inst.id = "check";
  inst.geometry = parse_geometry(geometry);
  inst.comparison["tree"] = notation;
  stage("parse tree", kUsage, [&] { return treecmp::parse_tree(notation); });
  if (!assign.empty()) {
    Json a = Json::object();
    for (const auto& item : assign) {
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
        throw Failure{kUsage, "assignment: expected vertex=point, got '" + item + "'"};
      }
      a[item.substr(0, eq)] = item.substr(eq + 1);
    }
    inst.comparison["assignment"] = std::move(a);
  }
  const auto problem = stage("assignment", kUsage, [&] { return treecmp::corpus::build_problem(inst, space); });
  const auto cert = stage("solve", kDataErr, [&] { return treecmp::solve(problem, g.solve_options()); });
  Output out(g.out);
  out.stream() << treecmp::report::certificate_json(cert, problem).dump(2) << '\n';
  return exit_for(cert.status);
}

int cmd_pentagon(const Globals& g, double eps, double delta, bool grid) {
  Output out(g.out);
  const auto opts = g.solve_options();
  if (!grid) {
    const auto rep = stage("pentagon", kDataErr, [&] { return treecmp::pentagon_report(eps, delta, opts); });
    Json j = treecmp::report::pentagon_json(rep);
    if (rep.matrix_inequality_all_poles && !rep.counterexample && eps > 0) {
      j["caveat"] = "perturbation is below the solver tolerances; the verdict does not resolve the exact construction";
      j["feas_tol"] = opts.feas_tol;
      j["infeas_tol"] = opts.infeas_tol;
    }
    out.stream() << j.dump(2) << '\n';
    return 0;
  }
  const auto search = treecmp::pentagon_grid_search({1e-6, 1e-5, 1e-4, 1e-3}, {10, 100, 1000}, opts);
  for (const auto& e : search.entries) out.line(treecmp::report::pentagon_json(e));
  Json summary;
  summary["summary"] = true;
  summary["entries"] = search.entries.size();
  if (search.found) {
    summary["found_eps"] = search.entries[*search.found].eps;
    summary["found_delta"] = search.entries[*search.found].delta;
  } else {
    summary["found_eps"] = nullptr;
  }
  out.line(summary);
  return search.found ? 0 : 1;
}

int cmd_mtw_scan(const Globals& g, int count, double step, double max_w) {
  const auto recs = stage("mtw-scan", kDataErr, [&] { return treecmp::batch::mtw_scan(g.seed, count, step, 2, max_w); });
  Output out(g.out);
  std::size_t violations = 0;
  std::size_t errors = 0;
  for (const auto& r : recs) {
    out.line(treecmp::report::mtw_json(r));
    if (!r.error.empty()) ++errors;
    else if (r.sample.fourth_derivative > 1e-3) ++violations;
  }
  Json summary;
  summary["summary"] = true;
  summary["samples"] = recs.size();
  summary["passed"] = recs.size() - violations - errors;
  summary["violations"] = violations;
  summary["errors"] = errors;
  out.line(summary);
  return (violations + errors) ? 1 : 0;
}

int cmd_pivotal(const Globals& g, int count, const std::string& shape) {
  const auto [first, second] = parse_shape(shape);
  const auto recs = stage("pivotal", kDataErr, [&] { return treecmp::batch::pivotal(first, second, g.seed, count); });
  Output out(g.out);
  std::size_t failed = 0;
  for (const auto& r : recs) {
    out.line(treecmp::report::pivotal_record_json(r));
    if (!r.success) ++failed;
  }
  Json summary;
  summary["summary"] = true;
  summary["samples"] = recs.size();
  summary["passed"] = recs.size() - failed;
  summary["failed"] = failed;
  out.line(summary);
  return failed ? 1 : 0;
}

int cmd_sphere_sample(const Globals& g, int count, const std::string& notation, int n, int dim,
                      const std::string& geometry) {
  const auto tree = stage("parse tree", kUsage, [&] { return treecmp::parse_tree(notation); });
  if (n > 0 && std::size_t(n) != tree.size()) {
    throw Failure{kUsage, "sphere-sample: tree has " + std::to_string(tree.size()) + " vertices, -n says " + std::to_string(n)};
  }
  const auto recs = stage("sphere-sample", kDataErr, [&] {
    return treecmp::batch::sphere_sample(tree, dim, parse_geometry(geometry), g.seed, count, g.solve_options());
  });
  Output out(g.out);
  std::map<std::string, std::size_t> counts;
  std::size_t from_model = 0;
  for (const auto& r : recs) {
    out.line(treecmp::report::solve_record_json(r));
    ++counts[treecmp::to_string(r.status)];
    if (r.from_model) ++from_model;
  }
  Json summary;
  summary["summary"] = true;
  summary["samples"] = recs.size();
  for (const char* s : {"Feasible", "Infeasible", "Undecided"}) summary[s] = counts[s];
  summary["from_model"] = from_model;
  out.line(summary);
  return counts["Infeasible"] ? 1 : 0;
}

int cmd_plant(const Globals& g, const std::string& notation, int dim) {
  const auto tree = stage("parse tree", kUsage, [&] { return treecmp::parse_tree(notation); });
  const auto inst = stage("plant", kDataErr, [&] { return treecmp::plant_feasible(tree, dim, g.seed); });
  const std::size_t n = tree.size();
  treecmp::Matrix d(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) d(a, b) = inst.space(inst.assignment[a], inst.assignment[b]);
  }
  const auto labels = tree.labeled() ? tree.labels() : treecmp::default_labels(n);
  const auto space = stage("plant", kDataErr, [&] { return treecmp::FiniteMetricSpace::validate(d, labels); });
  Output out(g.out);
  treecmp::write_metric(out.stream(), space);
  return 0;
}

int cmd_corpus_run(const Globals& g, const std::string& dir) {
  const auto instances = stage("load corpus", kNoInput, [&] { return treecmp::corpus::load_corpus(dir); });
  const auto run = treecmp::corpus::run_corpus(instances, g.solve_options());
  Output out(g.out);
  for (const auto& r : run.records) out.line(r);
  out.line(run.summary);
  return (run.mismatches || run.errors) ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tree comparison checks for finite metric spaces"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "flat key=value file; command-line flags take precedence");

  Globals g;
  app.add_option("--seed", g.seed, "random seed (first seed for batches)");
  app.add_option("--tol", g.tol, "feasibility tolerance")->check(CLI::PositiveNumber);
  app.add_option("--max-iter", g.max_iter, "projection iteration limit")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "write the report here instead of stdout");

  std::function<int()> action;

  auto* check = app.add_subcommand("check", "decide a tree comparison for a metric file");
  std::string metric_file;
  std::string notation;
  std::vector<std::string> assign;
  std::string geometry = "euclidean";
  check->add_option("metric", metric_file, "metric file")->required();
  check->add_option("tree", notation, "tree notation, e.g. p/xyz")->required();
  check->add_option("--assign", assign, "vertex=point pairs; defaults to matching labels");
  check->add_option("--geometry", geometry, "euclidean or spherical");
  check->callback([&] { action = [&] { return cmd_check(g, metric_file, notation, assign, geometry); }; });

  auto* pent = app.add_subcommand("pentagon", "perturbed regular pentagon with center");
  double eps = 1e-9;
  double delta = 1e-6;
  bool grid = false;
  pent->add_option("--eps", eps, "added to the diagonals");
  pent->add_option("--delta", delta, "removed from the sides");
  pent->add_flag("--grid", grid, "search eps in 1e-6..1e-3 against delta = 10..1000 eps");
  pent->callback([&] { action = [&] { return cmd_pentagon(g, eps, delta, grid); }; });

  auto* mtw = app.add_subcommand("mtw-scan", "fourth-derivative scan on S^2");
  int count = 200;
  double step = 0.02;
  double max_w = 1.0;
  mtw->add_option("--count", count, "number of seeds")->check(CLI::PositiveNumber);
  mtw->add_option("--step", step, "finite-difference step");
  mtw->add_option("--max-w", max_w, "largest |W|");
  mtw->callback([&] { action = [&] { return cmd_mtw_scan(g, count, step, max_w); }; });

  auto* piv = app.add_subcommand("pivotal", "pivotal construction on sphere-sampled bipolar trees");
  std::string shape = "2(2)";
  piv->add_option("--count", count, "number of seeds")->check(CLI::PositiveNumber);
  piv->add_option("--tree", shape, "shape a(b)");
  piv->callback([&] { action = [&] { return cmd_pivotal(g, count, shape); }; });

  auto* sph = app.add_subcommand("sphere-sample", "random points on S^d against a tree comparison");
  std::string sample_tree = "4(1)";
  int n = 0;
  int dim = 2;
  std::string sample_geometry = "euclidean";
  sph->add_option("--count", count, "number of seeds")->check(CLI::PositiveNumber);
  sph->add_option("--tree", sample_tree, "tree notation or shape");
  sph->add_option("-n", n, "number of points (must match the tree)");
  sph->add_option("--dim", dim, "sphere dimension")->check(CLI::PositiveNumber);
  sph->add_option("--geometry", sample_geometry, "euclidean or spherical");
  sph->callback([&] { action = [&] { return cmd_sphere_sample(g, count, sample_tree, n, dim, sample_geometry); }; });

  auto* plant = app.add_subcommand("plant", "write a metric file that satisfies a tree comparison");
  std::string plant_tree;
  int plant_dim = 3;
  plant->add_option("tree", plant_tree, "tree notation")->required();
  plant->add_option("--dim", plant_dim, "ambient dimension")->check(CLI::PositiveNumber);
  plant->callback([&] { action = [&] { return cmd_plant(g, plant_tree, plant_dim); }; });

  auto* crun = app.add_subcommand("corpus-run", "run every instance in a corpus directory");
  std::string dir = "corpus";
  crun->add_option("dir", dir, "corpus directory");
  crun->callback([&] { action = [&] { return cmd_corpus_run(g, dir); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    return action();
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.code;
  } catch (const treecmp::Error& e) {
    std::cerr << "error: " << treecmp::to_string(e.code()) << ": " << e.what() << '\n';
    return kDataErr;
  }
}
