#pragma once

#include <optional>
#include <string>
#include <vector>

#include "treecmp/report.hpp"

namespace treecmp::corpus {

using report::Json;

enum class Expected { Feasible, Infeasible, Unknown };

const char* to_string(Expected e) noexcept;

/// One instance file. `space` is either explicit
/// {"labels": [...], "distances": [[...]]} or a seeded generator
/// {"generator": "pentagon" | "sphere" | "planted", ...}; null when the data
/// is not available yet. `comparison` is {"tree": notation, "assignment":
/// {vertex: point}} or {"graph": {"minus": [[a, b]], "plus": [[a, b]]}}.
struct Instance {
  std::string id;
  Json space;
  Json comparison;
  Geometry geometry = Geometry::Euclidean;
  Expected expected = Expected::Unknown;
  std::string provenance;
};

Instance parse_instance(const Json& j);
Instance load_instance(const std::string& path);

/// Every *.json file in `dir`, sorted by id. Throws InvalidInput on a
/// repeated id.
std::vector<Instance> load_corpus(const std::string& dir);

/// Builds the space; nullopt when the instance carries no data.
std::optional<FiniteMetricSpace> build_space(const Json& space);

GramProblem build_problem(const Instance& inst, const FiniteMetricSpace& space);

/// One report line: id, expected, status, match, gap, iterations,
/// max_violation. Instances without data report status "NoData".
Json run_instance(const Instance& inst, const SolveOptions& opts);

struct RunSummary {
  std::vector<Json> records;  // sorted by id
  std::size_t mismatches = 0;
  std::size_t errors = 0;
  Json summary;
};

RunSummary run_corpus(const std::vector<Instance>& instances, const SolveOptions& opts,
                      Execution exec = Execution::Parallel);

}  // namespace treecmp::corpus
