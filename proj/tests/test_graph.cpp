#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "support.hpp"
#include "trine/graph.hpp"

using namespace trine;
using trine::testing::random_graph;

static std::vector<NodeId> nbrs(const MixedGraph& g, NodeId v) {
  auto s = out_neighbors(g, v);
  return {s.begin(), s.end()};
}

TEST_CASE("out-neighbours") {
  CHECK(nbrs(testing::ring(3), 0) == std::vector<NodeId>{1, 2});
  CHECK(nbrs(MixedGraph(2, {{0, 1}}, {}), 1).empty());
  CHECK(nbrs(MixedGraph(3, {{0, 1}}, {{0, 2}}), 0) == std::vector<NodeId>{1, 2});
}

TEST_CASE("construction rejects bad edges") {
  CHECK_THROWS_AS(MixedGraph(2, {{0, 0}}, {}), GraphError);
  CHECK_THROWS_AS(MixedGraph(2, {}, {{1, 1}}), GraphError);
  CHECK_THROWS_AS(MixedGraph(2, {{0, 1}, {0, 1}}, {}), GraphError);
  CHECK_THROWS_AS(MixedGraph(2, {}, {{0, 1}, {1, 0}}), GraphError);
  CHECK_THROWS_AS(MixedGraph(2, {{0, 1}}, {{0, 1}}), GraphError);
  CHECK_THROWS_AS(MixedGraph(2, {{1, 0}}, {{0, 1}}), GraphError);
  CHECK_THROWS_AS(MixedGraph(2, {{0, 2}}, {}), GraphError);
  CHECK_NOTHROW(MixedGraph(2, {{0, 1}, {1, 0}}, {}));
}

TEST_CASE("transliterate and complement") {
  CHECK(transliterate(Coloring::parse("ABA")).str() == "ACA");
  CHECK(transliterate(Coloring::parse("AAAA")).all_a());
  CHECK(complement(Coloring::parse("ABA")).str() == "BAB");
  CHECK(complement(Coloring::parse("CCC")).str() == "CCC");
  CHECK_THROWS_AS(Coloring::parse("ABX"), GraphError);

  for (std::size_t n = 1; n <= 4; ++n) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= 3;
    for (std::size_t i = 0; i < total; ++i) {
      const Coloring c = testing::coloring_from_index(i, n);
      REQUIRE(transliterate(transliterate(c)) == c);
      REQUIRE(complement(complement(c)) == c);
    }
  }
}

TEST_CASE("computability") {
  const MixedGraph cycle(3, {{0, 1}, {1, 2}, {2, 0}}, {});
  CHECK(super_weak_computable(cycle));
  CHECK_FALSE(weak_computable(cycle));
  CHECK_FALSE(super_weak_computable(MixedGraph(2, {}, {})));
  CHECK_FALSE(super_weak_computable(MixedGraph(3, {{0, 1}, {1, 2}}, {})));
  CHECK(weak_computable(testing::ring(5)));
  CHECK(super_weak_computable(testing::ring(5)));

  std::mt19937_64 rng(11);
  int weak = 0;
  for (int i = 0; i < 1000; ++i) {
    const MixedGraph g = random_graph(rng, 2 + i % 9, 0.3 + 0.05 * (i % 10));
    if (weak_computable(g)) {
      ++weak;
      REQUIRE(super_weak_computable(g));
    }
  }
  CHECK(weak > 50);
}

TEST_CASE("json round trip") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const MixedGraph g = random_graph(rng, 1 + i % 8);
    const MixedGraph h = MixedGraph::from_json(g.to_json());
    CHECK(h.directed() == g.directed());
    CHECK(h.undirected() == g.undirected());
    CHECK(h.node_count() == g.node_count());
  }
}
