#include "treecmp/report.hpp"

namespace treecmp::report {

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

Json problem_json(const GramProblem& problem) {
  Json targets = Json::array();
  for (const auto& t : problem.targets) {
    targets.push_back(Json::array({t.i, t.j, t.distance, to_string(t.relation)}));
  }
  Json out;
  out["k"] = problem.k;
  out["geometry"] = to_string(problem.geometry);
  out["targets"] = std::move(targets);
  return out;
}

Json certificate_json(const Certificate& cert, const GramProblem& problem) {
  Json out;
  out["status"] = to_string(cert.status);
  out["coordinates"] = to_json(cert.coordinates);
  out["max_violation"] = cert.max_violation;
  out["gap"] = cert.gap;
  if (cert.status == Status::Infeasible) out["gap_bound"] = cert.gap_bound;
  out["iterations"] = cert.iterations;
  out["seed"] = cert.seed;
  out["problem"] = problem_json(problem);
  return out;
}

Json mtw_json(const batch::MtwRecord& rec) {
  const auto& s = rec.sample;
  Json out;
  out["p"] = to_json(s.p);
  out["W"] = to_json(s.W);
  out["X"] = to_json(s.X);
  out["Y"] = to_json(s.Y);
  out["S"] = s.S;
  out["fourth_derivative"] = s.fourth_derivative;
  out["step"] = s.step;
  out["seed"] = s.seed;
  if (!rec.error.empty()) out["error"] = rec.error;
  return out;
}

Json solve_record_json(const batch::SolveRecord& rec) {
  Json out;
  out["seed"] = rec.seed;
  out["status"] = to_string(rec.status);
  out["max_violation"] = rec.max_violation;
  out["gap"] = rec.gap;
  out["iterations"] = rec.iterations;
  out["from_model"] = rec.from_model;
  return out;
}

Json pivotal_record_json(const batch::PivotalRecord& rec) {
  Json out;
  out["seed"] = rec.seed;
  out["success"] = rec.success;
  if (!rec.failure.empty()) out["failure"] = rec.failure;
  out["max_alpha"] = rec.max_alpha;
  out["worst_triple_sum"] = rec.worst_triple_sum;
  out["energy"] = rec.energy;
  out["equal_error"] = rec.equal_error;
  out["atleast_slack"] = rec.atleast_slack;
  return out;
}

namespace {

Json finite_or_null(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (std::isfinite(m(r, c))) {
        row.push_back(m(r, c));
      } else {
        row.push_back(nullptr);  // unsatisfiable pair
      }
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

Json pivotal_result_json(const PivotalResult& result) {
  Json out;
  out["success"] = result.success;
  if (!result.failure.empty()) out["failure"] = result.failure;
  out["alphas"] = finite_or_null(result.alphas);
  out["pairs_ok"] = result.corollary.pairs_ok;
  out["triples_ok"] = result.corollary.triples_ok;
  out["worst_triple"] = result.corollary.worst_triple;
  out["worst_triple_sum"] = result.corollary.worst_triple_sum;
  out["energy"] = result.realize.energy;
  out["min_slack"] = result.realize.min_slack;
  out["equal_error"] = result.equal_error;
  out["atleast_slack"] = result.atleast_slack;
  out["xi"] = to_json(result.config.xi);
  out["coords"] = to_json(result.config.coords);
  return out;
}

Json pentagon_json(const PentagonReport& report) {
  Json out;
  out["eps"] = report.eps;
  out["delta"] = report.delta;
  out["pole_minima"] = report.pole_minima;
  out["matrix_inequality_all_poles"] = report.matrix_inequality_all_poles;
  out["five_pole_comparison"] = to_string(report.comparison.status);
  out["gap"] = report.comparison.gap;
  out["gap_bound"] = report.comparison.gap_bound;
  out["iterations"] = report.comparison.iterations;
  out["counterexample"] = report.counterexample;
  return out;
}

GeodesicBipolarTree bipolar_tree_from_json(const Json& j) {
  try {
    GeodesicBipolarTree tree;
    tree.pole_dist = j.at("pole_dist").get<double>();
    for (const auto& leaf : j.at("leaves")) {
      tree.leaves.push_back(
          {leaf.at("pole").get<int>(), leaf.at("r").get<double>(), leaf.at("beta").get<double>()});
    }
    if (j.contains("targets")) {
      for (const auto& t : j.at("targets")) {
        tree.targets.push_back({t.at(0).get<std::size_t>(), t.at(1).get<std::size_t>(),
                                t.at(2).get<double>()});
      }
    }
    if (j.contains("cross_targets")) tree.cross_targets = j.at("cross_targets").get<std::vector<double>>();
    tree.validate();
    return tree;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidInput, std::string("bad tree JSON: ") + e.what());
  }
}

Json bipolar_tree_json(const GeodesicBipolarTree& tree) {
  Json out;
  out["pole_dist"] = tree.pole_dist;
  Json leaves = Json::array();
  for (const auto& l : tree.leaves) {
    Json leaf;
    leaf["pole"] = l.pole;
    leaf["r"] = l.r;
    leaf["beta"] = l.beta;
    leaves.push_back(std::move(leaf));
  }
  out["leaves"] = std::move(leaves);
  Json targets = Json::array();
  for (const auto& t : tree.targets) targets.push_back(Json::array({t.i, t.j, t.distance}));
  out["targets"] = std::move(targets);
  if (!tree.cross_targets.empty()) out["cross_targets"] = tree.cross_targets;
  return out;
}

}  // namespace treecmp::report
