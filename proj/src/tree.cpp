#include "treecmp/tree.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>
#include <set>

namespace treecmp {

ComparisonTree ComparisonTree::from_edges(std::size_t n, const std::vector<Edge>& edges,
                                          std::optional<std::vector<std::string>> labels,
                                          std::optional<std::size_t> root) {
  if (n == 0) throw Error(Errc::EmptyTree, "tree has no vertices");
  if (edges.size() + 1 != n) throw Error(Errc::NotATree, "a tree on n vertices has n-1 edges");
  ComparisonTree t;
  t.adj_.assign(n, {});
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [a, b] : edges) {
    if (a >= n || b >= n || a == b) throw Error(Errc::NotATree, "invalid edge");
    const auto ra = find(a);
    const auto rb = find(b);
    if (ra == rb) throw Error(Errc::NotATree, "edge set has a cycle");
    parent[ra] = rb;
    t.adj_[a].push_back(b);
    t.adj_[b].push_back(a);
  }
  for (auto& nb : t.adj_) std::sort(nb.begin(), nb.end());
  if (labels) {
    if (labels->size() != n) throw Error(Errc::InvalidInput, "label count mismatch");
    std::set<std::string> seen;
    for (const auto& l : *labels) {
      if (!seen.insert(l).second) throw Error(Errc::DuplicateLabel, "duplicate label '" + l + "'");
    }
  }
  if (root && *root >= n) throw Error(Errc::IndexOutOfRange, "root out of range");
  t.labels_ = std::move(labels);
  t.root_ = root;
  return t;
}

bool ComparisonTree::adjacent(std::size_t a, std::size_t b) const {
  const auto& nb = adj_.at(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

std::vector<ComparisonTree::Edge> ComparisonTree::edges() const {
  std::vector<Edge> out;
  for (std::size_t v = 0; v < adj_.size(); ++v) {
    for (auto w : adj_[v]) {
      if (v < w) out.emplace_back(v, w);
    }
  }
  return out;
}

std::vector<std::size_t> ComparisonTree::poles() const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < adj_.size(); ++v) {
    if (adj_[v].size() >= 2) out.push_back(v);
  }
  return out;
}

std::vector<std::size_t> ComparisonTree::leaves() const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < adj_.size(); ++v) {
    if (adj_[v].size() == 1) out.push_back(v);
  }
  return out;
}

std::size_t ComparisonTree::index_of(std::string_view name) const {
  if (!labels_) return size();
  for (std::size_t v = 0; v < labels_->size(); ++v) {
    if ((*labels_)[v] == name) return v;
  }
  return size();
}

ComparisonTree ComparisonTree::unlabeled() const {
  ComparisonTree t = *this;
  t.labels_.reset();
  return t;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

bool is_ident(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '\'';
}

class Builder {
 public:
  std::size_t add(std::optional<std::size_t> parent, std::string label = {}) {
    const std::size_t v = labels_.size();
    labels_.push_back(std::move(label));
    if (parent) edges_.emplace_back(*parent, v);
    return v;
  }
  ComparisonTree finish(bool labeled) {
    std::optional<std::vector<std::string>> labels;
    if (labeled) labels = std::move(labels_);
    else labels_.clear();
    const std::size_t n = labeled ? labels->size() : edges_.size() + 1;
    return ComparisonTree::from_edges(n, edges_, std::move(labels), 0);
  }

 private:
  std::vector<std::string> labels_;
  std::vector<ComparisonTree::Edge> edges_;
};

class LabeledParser {
 public:
  explicit LabeledParser(std::string_view s) : s_(s) {}

  ComparisonTree run() {
    node(std::nullopt);
    if (pos_ != s_.size()) throw SyntaxError(pos_, "unexpected '" + std::string(1, s_[pos_]) + "'");
    return b_.finish(true);
  }

 private:
  void node(std::optional<std::size_t> parent) {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && is_ident(s_[pos_])) ++pos_;
    if (pos_ == start) throw SyntaxError(pos_, "expected a label");
    const std::size_t v = vertex(parent, std::string(s_.substr(start, pos_ - start)), start);
    if (pos_ >= s_.size() || s_[pos_] != '/') throw SyntaxError(pos_, "expected '/'");
    ++pos_;
    children(v);
  }

  void children(std::size_t parent) {
    const bool commas = list_uses_commas();
    std::size_t items = 0;
    while (pos_ < s_.size() && s_[pos_] != ')') {
      if (items > 0 && s_[pos_] == ',') {
        ++pos_;
        if (pos_ >= s_.size() || s_[pos_] == ')') throw SyntaxError(pos_, "expected a child after ','");
      }
      const char c = s_[pos_];
      if (c == '(') {
        const std::size_t open = pos_++;
        node(parent);
        if (pos_ >= s_.size() || s_[pos_] != ')') throw SyntaxError(open, "unclosed bracket");
        ++pos_;
      } else if (is_ident(c) && c != '\'') {
        const std::size_t start = pos_;
        if (commas) {
          while (pos_ < s_.size() && is_ident(s_[pos_])) ++pos_;
        } else {
          ++pos_;
          while (pos_ < s_.size() && s_[pos_] == '\'') ++pos_;
        }
        vertex(parent, std::string(s_.substr(start, pos_ - start)), start);
      } else {
        throw SyntaxError(pos_, "unexpected '" + std::string(1, c) + "'");
      }
      ++items;
    }
    if (items == 0) throw SyntaxError(pos_, "expected at least one child");
  }

  bool list_uses_commas() const {
    int depth = 0;
    for (std::size_t i = pos_; i < s_.size(); ++i) {
      const char c = s_[i];
      if (c == '(') ++depth;
      else if (c == ')') {
        if (depth == 0) return false;
        --depth;
      } else if (c == ',' && depth == 0) {
        return true;
      }
    }
    return false;
  }

  std::size_t vertex(std::optional<std::size_t> parent, std::string label, std::size_t at) {
    if (!seen_.insert(label).second) {
      throw Error(Errc::DuplicateLabel,
                  "duplicate label '" + label + "' at position " + std::to_string(at));
    }
    return b_.add(parent, std::move(label));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  Builder b_;
  std::set<std::string> seen_;
};

class ShapeParser {
 public:
  explicit ShapeParser(std::string_view s) : s_(s) {}

  ComparisonTree run() {
    if (s_[0] == '(') {
      const std::size_t root = b_.add(std::nullopt);
      const std::size_t open = pos_++;
      shape(root);
      if (pos_ >= s_.size() || s_[pos_] != ')') throw SyntaxError(open, "unclosed bracket");
      ++pos_;
    } else {
      shape(std::nullopt);
    }
    if (pos_ != s_.size()) throw SyntaxError(pos_, "unexpected '" + std::string(1, s_[pos_]) + "'");
    return b_.finish(false);
  }

 private:
  void shape(std::optional<std::size_t> parent) {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start) throw SyntaxError(pos_, "expected a leaf count");
    if (pos_ - start > 4) throw SyntaxError(start, "leaf count too large");
    const int count = std::stoi(std::string(s_.substr(start, pos_ - start)));
    if (count == 0) throw SyntaxError(start, "leaf count must be positive");
    const std::size_t v = b_.add(parent);
    for (int i = 0; i < count; ++i) b_.add(v);
    if (pos_ < s_.size() && s_[pos_] == '(') {
      const std::size_t open = pos_++;
      shape(v);
      if (pos_ >= s_.size() || s_[pos_] != ')') throw SyntaxError(open, "unclosed bracket");
      ++pos_;
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  Builder b_;
};

}  // namespace

ComparisonTree parse_tree(std::string_view notation) {
  while (!notation.empty() && std::isspace(static_cast<unsigned char>(notation.front()))) {
    notation.remove_prefix(1);
  }
  while (!notation.empty() && std::isspace(static_cast<unsigned char>(notation.back()))) {
    notation.remove_suffix(1);
  }
  if (notation.empty()) throw Error(Errc::EmptyTree, "empty tree notation");
  if (notation.find('/') != std::string_view::npos) return LabeledParser(notation).run();
  return ShapeParser(notation).run();
}

// ---------------------------------------------------------------------------
// Formatting

namespace {

struct Rooted {
  std::vector<std::size_t> leaf_children;
  std::vector<std::size_t> subtree_children;
};

Rooted split_children(const ComparisonTree& t, std::size_t v, std::optional<std::size_t> parent) {
  Rooted r;
  for (auto w : t.neighbors(v)) {
    if (parent && w == *parent) continue;
    if (t.degree(w) == 1) r.leaf_children.push_back(w);
    else r.subtree_children.push_back(w);
  }
  return r;
}

bool multi_char(const std::string& label) {
  std::size_t n = label.size();
  while (n > 0 && label[n - 1] == '\'') --n;
  return n != 1;
}

std::string format_labeled(const ComparisonTree& t, std::size_t v, std::optional<std::size_t> parent) {
  const Rooted r = split_children(t, v, parent);
  bool commas = false;
  for (auto w : r.leaf_children) commas = commas || multi_char(t.label(w));
  std::string out = t.label(v) + "/";
  bool first = true;
  auto sep = [&] {
    if (!first && commas) out += ',';
    first = false;
  };
  for (auto w : r.leaf_children) {
    sep();
    out += t.label(w);
  }
  for (auto w : r.subtree_children) {
    sep();
    out += "(" + format_labeled(t, w, v) + ")";
  }
  return out;
}

std::string format_shape(const ComparisonTree& t, std::size_t v, std::size_t parent) {
  const Rooted r = split_children(t, v, parent);
  if (r.leaf_children.empty() || r.subtree_children.size() > 1) {
    throw Error(Errc::NotExpressible, "shape notation cannot encode this rooted tree");
  }
  std::string out = std::to_string(r.leaf_children.size());
  if (!r.subtree_children.empty()) out += "(" + format_shape(t, r.subtree_children[0], v) + ")";
  return out;
}

}  // namespace

std::string format_tree(const ComparisonTree& tree, std::size_t root) {
  if (root >= tree.size()) throw Error(Errc::IndexOutOfRange, "root vertex out of range");
  if (tree.size() < 2) throw Error(Errc::NotExpressible, "a single vertex has no encoding");
  if (tree.labeled()) {
    for (const auto& l : tree.labels()) {
      if (l.empty() || l.front() == '\'' ||
          !std::all_of(l.begin(), l.end(), [](char c) { return is_ident(c); })) {
        throw Error(Errc::NotExpressible, "label '" + l + "' is not an identifier");
      }
    }
    return format_labeled(tree, root, std::nullopt);
  }
  const Rooted r = split_children(tree, root, std::nullopt);
  if (r.subtree_children.size() > 1) {
    throw Error(Errc::NotExpressible, "shape notation cannot encode this rooted tree");
  }
  if (r.leaf_children.empty()) return "(" + format_shape(tree, r.subtree_children[0], root) + ")";
  std::string out = std::to_string(r.leaf_children.size());
  if (!r.subtree_children.empty()) out += "(" + format_shape(tree, r.subtree_children[0], root) + ")";
  return out;
}

// ---------------------------------------------------------------------------
// Isomorphism (canonical forms rooted at the center)

namespace {

std::vector<std::size_t> centers(const ComparisonTree& t) {
  const std::size_t n = t.size();
  if (n <= 2) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    return all;
  }
  std::vector<std::size_t> deg(n);
  std::vector<std::size_t> layer;
  for (std::size_t v = 0; v < n; ++v) {
    deg[v] = t.degree(v);
    if (deg[v] == 1) layer.push_back(v);
  }
  std::size_t remaining = n;
  while (remaining > 2) {
    remaining -= layer.size();
    std::vector<std::size_t> next;
    for (auto v : layer) {
      for (auto w : t.neighbors(v)) {
        if (--deg[w] == 1) next.push_back(w);
      }
    }
    layer = std::move(next);
  }
  std::sort(layer.begin(), layer.end());
  return layer;
}

std::string canonical(const ComparisonTree& t, std::size_t v, std::optional<std::size_t> parent,
                      bool with_labels) {
  std::vector<std::string> kids;
  for (auto w : t.neighbors(v)) {
    if (parent && w == *parent) continue;
    kids.push_back(canonical(t, w, v, with_labels));
  }
  std::sort(kids.begin(), kids.end());
  std::string out = "(";
  if (with_labels) out += std::to_string(t.label(v).size()) + ":" + t.label(v);
  for (const auto& k : kids) out += k;
  out += ")";
  return out;
}

std::string canonical(const ComparisonTree& t, bool with_labels) {
  std::string best;
  for (auto c : centers(t)) {
    std::string s = canonical(t, c, std::nullopt, with_labels);
    if (best.empty() || s < best) best = std::move(s);
  }
  return best;
}

}  // namespace

bool tree_isomorphic(const ComparisonTree& a, const ComparisonTree& b, bool respect_labels) {
  if (a.size() != b.size()) return false;
  if (a.size() == 0) return true;
  if (respect_labels) {
    if (a.labeled() != b.labeled()) return false;
    const bool lab = a.labeled();
    return canonical(a, lab) == canonical(b, lab);
  }
  return canonical(a, false) == canonical(b, false);
}

bool contains_induced_tripod(const ComparisonTree& tree) {
  for (std::size_t v = 0; v < tree.size(); ++v) {
    if (tree.degree(v) >= 3) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Constraint lowering

const char* to_string(Relation r) noexcept {
  switch (r) {
    case Relation::Equal:
      return "Equal";
    case Relation::AtLeast:
      return "AtLeast";
    case Relation::AtMost:
      return "AtMost";
    case Relation::Free:
      return "Free";
  }
  return "Free";
}

ConstraintGraph::ConstraintGraph(std::size_t n)
    : n_(n), rel_(n * (n > 0 ? n - 1 : 0) / 2, Relation::Free), points_(n) {
  std::iota(points_.begin(), points_.end(), 0);
}

std::size_t ConstraintGraph::slot(std::size_t i, std::size_t j) const {
  if (i == j || i >= n_ || j >= n_) throw Error(Errc::IndexOutOfRange, "bad vertex pair");
  if (i > j) std::swap(i, j);
  // row-major upper triangle
  return i * n_ - i * (i + 1) / 2 + (j - i - 1);
}

Relation ConstraintGraph::relation(std::size_t i, std::size_t j) const { return rel_[slot(i, j)]; }

void ConstraintGraph::set(std::size_t i, std::size_t j, Relation r) { rel_[slot(i, j)] = r; }

std::size_t ConstraintGraph::count(Relation r) const {
  return static_cast<std::size_t>(std::count(rel_.begin(), rel_.end(), r));
}

void ConstraintGraph::set_points(std::vector<std::size_t> points) {
  if (points.size() != n_) throw Error(Errc::DimensionMismatch, "one point per vertex required");
  points_ = std::move(points);
}

ConstraintGraph tree_to_constraints(const ComparisonTree& tree,
                                    const std::map<std::string, std::size_t>& assignment) {
  std::vector<std::size_t> points(tree.size());
  for (std::size_t v = 0; v < tree.size(); ++v) {
    const std::string key = tree.labeled() ? tree.label(v) : std::to_string(v);
    auto it = assignment.find(key);
    if (it == assignment.end()) {
      throw Error(Errc::UnassignedVertex, "vertex '" + key + "' has no assigned point");
    }
    points[v] = it->second;
  }
  return tree_to_constraints(tree, points);
}

ConstraintGraph tree_to_constraints(const ComparisonTree& tree,
                                    const std::vector<std::size_t>& point_of_vertex) {
  if (point_of_vertex.size() != tree.size()) {
    throw Error(Errc::UnassignedVertex, "assignment must cover every vertex");
  }
  ConstraintGraph g(tree.size());
  for (std::size_t i = 0; i < tree.size(); ++i) {
    for (std::size_t j = i + 1; j < tree.size(); ++j) {
      g.set(i, j, tree.adjacent(i, j) ? Relation::Equal : Relation::AtLeast);
    }
  }
  g.set_points(point_of_vertex);
  return g;
}

ConstraintGraph graph_to_constraints(const std::vector<ComparisonTree::Edge>& edges_minus,
                                     const std::vector<ComparisonTree::Edge>& edges_plus,
                                     std::size_t n) {
  ConstraintGraph g(n);
  for (auto [a, b] : edges_minus) g.set(a, b, Relation::AtMost);
  for (auto [a, b] : edges_plus) {
    if (g.relation(a, b) == Relation::AtMost) {
      throw Error(Errc::OverlappingColors,
                  "pair (" + std::to_string(a) + "," + std::to_string(b) + ") has both colors");
    }
    g.set(a, b, Relation::AtLeast);
  }
  return g;
}

}  // namespace treecmp
