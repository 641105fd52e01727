#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treecmp/error.hpp"

namespace treecmp {

/// Combinatorial tree with optional vertex labels.
///
/// Vertices are 0..size()-1. Poles are vertices of degree >= 2 and leaves are
/// vertices of degree 1; both are derived from the edge set.
class ComparisonTree {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  ComparisonTree() = default;

  /// Throws NotATree unless the edges form a spanning tree on n vertices, and
  /// DuplicateLabel on repeated labels.
  static ComparisonTree from_edges(std::size_t n, const std::vector<Edge>& edges,
                                   std::optional<std::vector<std::string>> labels = std::nullopt,
                                   std::optional<std::size_t> root = std::nullopt);

  std::size_t size() const noexcept { return adj_.size(); }
  bool labeled() const noexcept { return labels_.has_value(); }
  const std::string& label(std::size_t v) const { return labels_.value().at(v); }
  const std::vector<std::string>& labels() const { return labels_.value(); }
  std::optional<std::size_t> root() const noexcept { return root_; }

  const std::vector<std::size_t>& neighbors(std::size_t v) const { return adj_.at(v); }
  std::size_t degree(std::size_t v) const { return adj_.at(v).size(); }
  bool adjacent(std::size_t a, std::size_t b) const;

  /// Edges with first < second, sorted.
  std::vector<Edge> edges() const;
  std::vector<std::size_t> poles() const;
  std::vector<std::size_t> leaves() const;

  /// Vertex carrying `name`, or size() when absent or unlabeled.
  std::size_t index_of(std::string_view name) const;

  /// Same shape without labels.
  ComparisonTree unlabeled() const;

 private:
  std::vector<std::vector<std::size_t>> adj_;
  std::optional<std::vector<std::string>> labels_;
  std::optional<std::size_t> root_;
};

/// Parses `root/leaves(child/...)` labeled notation or `2(2)`-style shapes.
///
/// Labels are identifiers made of letters, digits and apostrophes. Without
/// commas every label is one character plus trailing apostrophes (`xx'yy'`);
/// a children list containing a comma splits on commas instead (`p/x1,x2`).
ComparisonTree parse_tree(std::string_view notation);

/// Encodes the tree rooted at `root`; leaves come first, then subtrees, each
/// in vertex order. Unlabeled trees are written as shapes and throw
/// NotExpressible when the shape grammar cannot describe them.
std::string format_tree(const ComparisonTree& tree, std::size_t root);

bool tree_isomorphic(const ComparisonTree& a, const ComparisonTree& b, bool respect_labels);

/// True iff some vertex has degree >= 3, i.e. the tree is not a path.
bool contains_induced_tripod(const ComparisonTree& tree);

enum class Relation { Equal, AtLeast, AtMost, Free };

const char* to_string(Relation r) noexcept;

/// Relation on every unordered vertex pair, plus the point each vertex reads
/// its target distances from.
class ConstraintGraph {
 public:
  explicit ConstraintGraph(std::size_t n = 0);

  std::size_t size() const noexcept { return n_; }
  Relation relation(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, Relation r);
  std::size_t count(Relation r) const;

  const std::vector<std::size_t>& points() const noexcept { return points_; }
  void set_points(std::vector<std::size_t> points);

 private:
  std::size_t slot(std::size_t i, std::size_t j) const;

  std::size_t n_ = 0;
  std::vector<Relation> rel_;
  std::vector<std::size_t> points_;
};

/// Adjacent vertex pairs Equal, every other pair AtLeast. Several vertices may
/// share a point.
ConstraintGraph tree_to_constraints(const ComparisonTree& tree,
                                    const std::map<std::string, std::size_t>& assignment);
ConstraintGraph tree_to_constraints(const ComparisonTree& tree,
                                    const std::vector<std::size_t>& point_of_vertex);

/// (-)-edges AtMost, (+)-edges AtLeast, the rest Free.
ConstraintGraph graph_to_constraints(const std::vector<ComparisonTree::Edge>& edges_minus,
                                     const std::vector<ComparisonTree::Edge>& edges_plus,
                                     std::size_t n);

}  // namespace treecmp
