#include <doctest.h>

#include <random>

#include "treecmp/tree.hpp"

using namespace treecmp;

namespace {

ComparisonTree random_tree(std::size_t n, std::mt19937_64& rng, bool labeled) {
  std::vector<ComparisonTree::Edge> edges;
  for (std::size_t v = 1; v < n; ++v) edges.emplace_back(std::size_t(rng() % v), v);
  if (!labeled) return ComparisonTree::from_edges(n, edges);
  std::vector<std::string> labels;
  for (std::size_t v = 0; v < n; ++v) labels.push_back(std::string(1, char('a' + v)));
  return ComparisonTree::from_edges(n, edges, labels);
}

}  // namespace

TEST_CASE("labeled notation") {
  const auto t = parse_tree("p/xy(q/vw)");
  REQUIRE(t.size() == 6);
  REQUIRE(t.labeled());
  const auto p = t.index_of("p");
  const auto q = t.index_of("q");
  CHECK(t.adjacent(p, q));
  CHECK(t.adjacent(p, t.index_of("x")));
  CHECK(t.adjacent(q, t.index_of("w")));
  CHECK_FALSE(t.adjacent(t.index_of("x"), t.index_of("v")));
  CHECK(t.poles().size() == 2);
  CHECK(t.leaves().size() == 4);
  CHECK(t.root() == p);
}

TEST_CASE("equivalent notations describe one tree") {
  const auto a = parse_tree("p/xy(q/vw)");
  for (const char* other : {"q/vw(p/xy)", "x/(p/y(q/vw))"}) {
    CHECK(tree_isomorphic(a, parse_tree(other), true));
  }
  CHECK(tree_isomorphic(a, parse_tree("2(2)"), false));
  CHECK_FALSE(tree_isomorphic(a, parse_tree("3(1)"), false));
  // a root without leaves whose single child carries one leaf and the pole q
  CHECK(tree_isomorphic(parse_tree("(1(2))"), parse_tree("x/(p/y(q/vw))"), false));
  CHECK(tree_isomorphic(parse_tree("(1(2))"), parse_tree("2(2)"), false));
}

TEST_CASE("shapes") {
  CHECK(parse_tree("2(2)").size() == 6);
  CHECK(parse_tree("3(1)").size() == 6);
  CHECK(parse_tree("4(1)").size() == 7);
  CHECK_FALSE(parse_tree("2(2)").labeled());
}

TEST_CASE("apostrophes and comma lists") {
  const auto t = parse_tree("p/xx'yy'(q'/z)");
  CHECK(t.size() == 7);
  CHECK(t.index_of("x'") < t.size());
  CHECK(t.adjacent(t.index_of("q'"), t.index_of("z")));
  const auto c = parse_tree("p/x1,x2,x3");
  CHECK(c.size() == 4);
  CHECK(c.index_of("x2") < c.size());
}

TEST_CASE("syntax errors carry a position") {
  for (const char* bad : {"", "p/x(", "p/xy)", "p//x", "p/x(q/)", "(", "p/x y"}) {
    CHECK_THROWS_AS(parse_tree(bad), Error);
  }
  try {
    parse_tree("p/x(q/y");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.position() == 3);  // the unclosed bracket
  }
  CHECK_THROWS_AS(parse_tree("p/xp"), Error);
}

TEST_CASE("format and parse round-trip from every root") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 11;
    const auto t = random_tree(n, rng, true);
    for (std::size_t root = 0; root < n; ++root) {
      const auto back = parse_tree(format_tree(t, root));
      REQUIRE(tree_isomorphic(t, back, true));
    }
  }
}

TEST_CASE("from_edges rejects non-trees") {
  CHECK_THROWS_AS(ComparisonTree::from_edges(3, {{0, 1}}), Error);
  CHECK_THROWS_AS(ComparisonTree::from_edges(3, {{0, 1}, {1, 2}, {0, 2}}), Error);
  CHECK_THROWS_AS(ComparisonTree::from_edges(2, {{0, 1}}, std::vector<std::string>{"a", "a"}), Error);
}

TEST_CASE("tripods") {
  CHECK(contains_induced_tripod(parse_tree("p/xyz")));
  CHECK_FALSE(contains_induced_tripod(parse_tree("x/(p/(q/v))")));
}

TEST_CASE("tree lowering") {
  const auto t = parse_tree("p/xyz");
  std::map<std::string, std::size_t> a{{"p", 0}, {"x", 1}, {"y", 2}, {"z", 3}};
  const auto g = tree_to_constraints(t, a);
  CHECK(g.count(Relation::Equal) == 3);
  CHECK(g.count(Relation::AtLeast) == 3);
  CHECK(g.relation(t.index_of("x"), t.index_of("y")) == Relation::AtLeast);
  a.erase("z");
  CHECK_THROWS_AS(tree_to_constraints(t, a), Error);

  const auto cg = graph_to_constraints({{0, 1}}, {{1, 2}}, 3);
  CHECK(cg.relation(0, 1) == Relation::AtMost);
  CHECK(cg.relation(1, 2) == Relation::AtLeast);
  CHECK(cg.relation(0, 2) == Relation::Free);
  CHECK_THROWS_AS(graph_to_constraints({{0, 1}}, {{1, 0}}, 3), Error);
}
