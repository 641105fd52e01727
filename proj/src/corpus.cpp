#include "treecmp/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "treecmp/sphere.hpp"

namespace treecmp::corpus {

const char* to_string(Expected e) noexcept {
  switch (e) {
    case Expected::Feasible:
      return "Feasible";
    case Expected::Infeasible:
      return "Infeasible";
    case Expected::Unknown:
      return "Unknown";
  }
  return "Unknown";
}

namespace {

Expected parse_expected(const std::string& s) {
  if (s == "Feasible") return Expected::Feasible;
  if (s == "Infeasible") return Expected::Infeasible;
  if (s == "Unknown") return Expected::Unknown;
  throw Error(Errc::InvalidInput, "expected must be Feasible, Infeasible or Unknown, got '" + s + "'");
}

Geometry parse_geometry(const std::string& s) {
  if (s == "Euclidean" || s == "euclidean") return Geometry::Euclidean;
  if (s == "Spherical" || s == "spherical") return Geometry::Spherical;
  throw Error(Errc::InvalidInput, "unknown geometry '" + s + "'");
}

std::size_t point_index(const FiniteMetricSpace& space, const Json& ref) {
  if (ref.is_number_unsigned()) {
    const auto i = ref.get<std::size_t>();
    if (i >= space.size()) throw Error(Errc::IndexOutOfRange, "point index out of range");
    return i;
  }
  const auto name = ref.get<std::string>();
  const std::size_t i = space.index_of(name);
  if (i == space.size()) throw Error(Errc::InvalidInput, "unknown point '" + name + "'");
  return i;
}

std::vector<ComparisonTree::Edge> edge_list(const FiniteMetricSpace& space, const Json& edges) {
  std::vector<ComparisonTree::Edge> out;
  for (const auto& e : edges) out.emplace_back(point_index(space, e.at(0)), point_index(space, e.at(1)));
  return out;
}

}  // namespace

Instance parse_instance(const Json& j) {
  try {
    Instance inst;
    inst.id = j.at("id").get<std::string>();
    if (inst.id.empty()) throw Error(Errc::InvalidInput, "instance id is empty");
    inst.space = j.contains("space") ? j.at("space") : Json();
    inst.comparison = j.at("comparison");
    inst.geometry = parse_geometry(j.value("geometry", std::string("Euclidean")));
    inst.expected = parse_expected(j.value("expected", std::string("Unknown")));
    inst.provenance = j.value("provenance", std::string());
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidInput, std::string("bad corpus instance: ") + e.what());
  }
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidInput, "cannot open '" + path + "'");
  try {
    return parse_instance(Json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidInput, path + ": " + e.what());
  }
}

std::vector<Instance> load_corpus(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error(Errc::InvalidInput, "'" + dir + "' is not a directory");
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") paths.push_back(entry.path().string());
  }
  std::sort(paths.begin(), paths.end());
  std::vector<Instance> out;
  std::set<std::string> ids;
  for (const auto& p : paths) {
    Instance inst = load_instance(p);
    if (!ids.insert(inst.id).second) throw Error(Errc::InvalidInput, "duplicate instance id '" + inst.id + "'");
    out.push_back(std::move(inst));
  }
  std::sort(out.begin(), out.end(), [](const Instance& a, const Instance& b) { return a.id < b.id; });
  return out;
}

std::optional<FiniteMetricSpace> build_space(const Json& space) {
  if (space.is_null()) return std::nullopt;
  try {
    if (space.contains("distances")) {
      const auto rows = space.at("distances").get<std::vector<std::vector<double>>>();
      const std::size_t n = rows.size();
      Matrix raw(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) throw Error(Errc::NotSquare, "distance matrix must be square");
        for (std::size_t j = 0; j < n; ++j) raw(i, j) = rows[i][j];
      }
      auto labels = space.contains("labels") ? space.at("labels").get<std::vector<std::string>>()
                                             : default_labels(n);
      return FiniteMetricSpace::validate(raw, std::move(labels));
    }
    const auto gen = space.at("generator").get<std::string>();
    if (gen == "pentagon") {
      return pentagon_space(space.at("eps").get<double>(), space.at("delta").get<double>());
    }
    const auto n = space.at("points").get<std::size_t>();
    const auto dim = space.value("dim", 2);
    const auto seed = space.at("seed").get<std::uint64_t>();
    std::mt19937_64 rng(seed);
    if (gen == "sphere") {
      Matrix pts(n, dim + 1);
      for (std::size_t i = 0; i < n; ++i) pts.row(i) = sphere::random_point(dim, rng).transpose();
      return sphere::sphere_space(pts);
    }
    if (gen == "planted") {
      std::normal_distribution<double> normal(0.0, 1.0);
      Matrix pts(n, dim);
      for (std::size_t i = 0; i < n; ++i) {
        for (int c = 0; c < dim; ++c) pts(i, c) = normal(rng);
      }
      return FiniteMetricSpace::validate(pairwise_distances(pts), default_labels(n));
    }
    throw Error(Errc::InvalidInput, "unknown generator '" + gen + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidInput, std::string("bad space: ") + e.what());
  }
}

GramProblem build_problem(const Instance& inst, const FiniteMetricSpace& space) {
  const Json& cmp = inst.comparison;
  try {
    if (cmp.contains("graph")) {
      const Json& g = cmp.at("graph");
      const auto minus = edge_list(space, g.value("minus", Json::array()));
      const auto plus = edge_list(space, g.value("plus", Json::array()));
      return GramProblem::from_constraints(graph_to_constraints(minus, plus, space.size()), space,
                                           inst.geometry);
    }
    const ComparisonTree tree = parse_tree(cmp.at("tree").get<std::string>());
    std::vector<std::size_t> points(tree.size());
    if (cmp.contains("assignment")) {
      const Json& a = cmp.at("assignment");
      for (std::size_t v = 0; v < tree.size(); ++v) {
        const std::string key = tree.labeled() ? tree.label(v) : std::to_string(v);
        if (!a.contains(key)) throw Error(Errc::UnassignedVertex, "vertex '" + key + "' has no point");
        points[v] = point_index(space, a.at(key));
      }
    } else {
      bool by_label = tree.labeled();
      for (std::size_t v = 0; by_label && v < tree.size(); ++v) {
        by_label = space.index_of(tree.label(v)) < space.size();
      }
      if (!by_label && tree.size() != space.size()) {
        throw Error(Errc::UnassignedVertex, "tree and space sizes differ and no assignment given");
      }
      for (std::size_t v = 0; v < tree.size(); ++v) {
        points[v] = by_label ? space.index_of(tree.label(v)) : v;
      }
    }
    return GramProblem::from_constraints(tree_to_constraints(tree, points), space, inst.geometry);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidInput, std::string("bad comparison: ") + e.what());
  }
}

Json run_instance(const Instance& inst, const SolveOptions& opts) {
  Json out;
  out["id"] = inst.id;
  out["expected"] = to_string(inst.expected);
  try {
    const auto space = build_space(inst.space);
    if (!space) {
      out["status"] = "NoData";
      out["match"] = inst.expected == Expected::Unknown;
      return out;
    }
    const GramProblem problem = build_problem(inst, *space);
    const Certificate cert = solve(problem, opts);
    out["status"] = treecmp::to_string(cert.status);
    out["match"] = inst.expected == Expected::Unknown ||
                   std::string(to_string(inst.expected)) == treecmp::to_string(cert.status);
    out["gap"] = cert.gap;
    if (cert.status == Status::Infeasible) out["gap_bound"] = cert.gap_bound;
    out["iterations"] = cert.iterations;
    out["max_violation"] = cert.max_violation;
  } catch (const Error& e) {
    out["status"] = "Error";
    out["match"] = false;
    out["error"] = std::string(treecmp::to_string(e.code())) + ": " + e.what();
  }
  return out;
}

RunSummary run_corpus(const std::vector<Instance>& instances, const SolveOptions& opts,
                      Execution exec) {
  std::vector<const Instance*> sorted;
  for (const auto& i : instances) sorted.push_back(&i);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->id < b->id; });
  RunSummary out;
  out.records.resize(sorted.size());
  const int n = int(sorted.size());
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < n; ++i) out.records[i] = run_instance(*sorted[i], opts);
  } else {
    for (int i = 0; i < n; ++i) out.records[i] = run_instance(*sorted[i], opts);
  }
  std::map<std::string, std::size_t> counts;
  for (const auto& r : out.records) {
    ++counts[r.at("status").get<std::string>()];
    if (r.at("status") == "Error") ++out.errors;
    if (!r.at("match").get<bool>()) ++out.mismatches;
  }
  out.summary["summary"] = true;
  out.summary["instances"] = out.records.size();
  out.summary["mismatches"] = out.mismatches;
  out.summary["errors"] = out.errors;
  Json by_status;
  for (const auto& [k, v] : counts) by_status[k] = v;
  out.summary["by_status"] = std::move(by_status);
  return out;
}

}  // namespace treecmp::corpus
