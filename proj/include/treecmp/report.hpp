#pragma once

#include <json.hpp>

#include "treecmp/batch.hpp"
#include "treecmp/pentagon.hpp"
#include "treecmp/pivotal.hpp"
#include "treecmp/solver.hpp"

// JSON encodings for reports. Keys keep insertion order so output diffs
// cleanly between runs.

namespace treecmp::report {

using Json = nlohmann::ordered_json;

Json to_json(const Vector& v);
Json to_json(const Matrix& m);  // row-major nested arrays

Json problem_json(const GramProblem& problem);
Json certificate_json(const Certificate& cert, const GramProblem& problem);
Json mtw_json(const batch::MtwRecord& rec);
Json solve_record_json(const batch::SolveRecord& rec);
Json pivotal_record_json(const batch::PivotalRecord& rec);
Json pivotal_result_json(const PivotalResult& result);
Json pentagon_json(const PentagonReport& report);

/// {pole_dist, leaves: [{pole, r, beta}], targets: [[i, j, d]], cross_targets?}
GeodesicBipolarTree bipolar_tree_from_json(const Json& j);
Json bipolar_tree_json(const GeodesicBipolarTree& tree);

}  // namespace treecmp::report
