#include "apasp/oracle.hpp"

#include <random>

#include "apasp/io.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace apasp;
using oracle::BigInt;
using oracle::BigRational;

TEST_CASE("dijkstra with counting on the reference graph") {
  const Graph g = testing::g1();
  const auto r = oracle::dijkstra_count(g, 0);
  CHECK(r.dist == std::vector<Weight>{Weight(0), Weight(1), Weight(1), Weight(2)});
  CHECK(r.sigma == std::vector<BigInt>{1, 1, 1, 2});

  SUBCASE("unreachable target") {
    const auto r3 = oracle::dijkstra_count(g, 3);
    CHECK(r3.dist[0].is_infinite());
    CHECK(r3.sigma[0] == 0);
  }
  SUBCASE("single out-arc") {
    Graph h(2);
    h.set_arc(0, 1, Weight(5));
    const auto rh = oracle::dijkstra_count(h, 0);
    CHECK(rh.dist[1] == Weight(5));
    CHECK(rh.sigma[1] == 1);
  }
}

TEST_CASE("dijkstra counts agree with exhaustive path enumeration") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + rng() % 6;  // up to 8
    const Graph g = gen_er(rng(), n, 0.35, 6);
    const auto census = oracle::enumerate_sps(g);
    std::map<std::pair<Vertex, Vertex>, BigInt> counted;
    for (const auto& [key, c] : census) {
      const auto& [t, wt] = key;
      counted[{std::get<0>(t), std::get<3>(t)}] += c;
    }
    for (Vertex s = 0; s < n; ++s) {
      const auto r = oracle::dijkstra_count(g, s);
      for (Vertex t = 0; t < n; ++t) {
        if (s == t) continue;
        BigInt expect = 0;
        auto it = counted.find({s, t});
        if (it != counted.end()) expect = it->second;
        CHECK(r.sigma[t] == expect);
      }
    }
  }
}

TEST_CASE("locally shortest path census") {
  const Graph g = testing::g1();
  const auto census = oracle::enumerate_lsps(g);
  // 5 single arcs plus the two 2-arc shortest paths.
  CHECK(census.size() == 7);
  const oracle::TupleKey t1{0, 1, 1, 3};
  const oracle::TupleKey t2{0, 2, 2, 3};
  const oracle::TupleKey arc03{0, 3, 0, 3};
  CHECK(census.at({t1, Weight(2)}) == 1);
  CHECK(census.at({t2, Weight(2)}) == 1);
  CHECK(census.at({arc03, Weight(3)}) == 1);

  SUBCASE("single arc graph") {
    Graph h(2);
    h.set_arc(0, 1, Weight(4));
    const auto c = oracle::enumerate_lsps(h);
    CHECK(c.size() == 1);
    CHECK(c.at({oracle::TupleKey{0, 1, 0, 1}, Weight(4)}) == 1);
  }
  SUBCASE("two-arc chain is a shortest tuple") {
    Graph h(3);
    h.set_arc(0, 1, Weight(2));
    h.set_arc(1, 2, Weight(3));
    const auto c = oracle::enumerate_lsps(h);
    CHECK(c.at({oracle::TupleKey{0, 1, 1, 2}, Weight(5)}) == 1);
  }
  SUBCASE("size guard") { CHECK_THROWS(oracle::enumerate_lsps(gen_er(3, 12, 0.2, 4))); }
}

TEST_CASE("lst predicate matches the census") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = gen_er(rng(), 5 + rng() % 3, 0.4, 5);
    const auto d = oracle::all_pairs_distances(g);
    const auto census = oracle::enumerate_lsps(g);
    for (const auto& [key, c] : census) CHECK(oracle::is_lst(g, d, key.first, key.second));
  }
}

TEST_CASE("betweenness centrality oracles agree") {
  const Graph g = testing::g1();
  const auto bc = oracle::brandes_bc(g);
  CHECK(bc[0] == BigRational(0));
  CHECK(bc[1] == BigRational(1, 2));
  CHECK(bc[2] == BigRational(1, 2));
  CHECK(bc[3] == BigRational(0));
  CHECK(oracle::bc_by_definition(g) == bc);

  SUBCASE("after removing the upper route vertex") {
    const Graph h = apply_weight_assignment(g, testing::delete_vertex(1));
    const auto b = oracle::brandes_bc(h);
    CHECK(b[2] == BigRational(1));
    CHECK(b[0] == BigRational(0));
    CHECK(b[1] == BigRational(0));
    CHECK(b[3] == BigRational(0));
  }
  SUBCASE("no interior vertices, all zero") {
    Graph h(3);
    h.set_arc(0, 1, Weight(1));
    h.set_arc(0, 2, Weight(1));
    for (const auto& v : oracle::brandes_bc(h)) CHECK(v == BigRational(0));
  }
  SUBCASE("random instances, accumulation vs definition") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 12; ++trial) {
      const Graph h = gen_er(rng(), 4 + rng() % 4, 0.4, 6);
      CHECK(oracle::brandes_bc(h) == oracle::bc_by_definition(h));
    }
  }
}

TEST_CASE("sp dag edges and nu star") {
  const Graph g = testing::g1();
  const auto e0 = oracle::sp_dag_edges(g, 0);
  const std::vector<std::pair<Vertex, Vertex>> expect{{0, 1}, {0, 2}, {1, 3}, {2, 3}};
  CHECK(e0 == expect);
  CHECK(oracle::nu_star(g) == 4);
}

TEST_CASE("level graph materialization") {
  const Graph g = testing::g1();
  SUBCASE("cutoff covering everything is the graph itself") {
    const std::vector<std::uint64_t> touch{1, 1, 1, 1};
    CHECK(oracle::materialize_level_graph(g, touch, 5) == g);
  }
  SUBCASE("recently updated vertices drop out") {
    const std::vector<std::uint64_t> touch{1, 9, 1, 1};
    const Graph gi = oracle::materialize_level_graph(g, touch, 5);
    CHECK(!gi.has_arc(0, 1));
    CHECK(!gi.has_arc(1, 3));
    CHECK(gi.has_arc(0, 2));
    CHECK(gi.has_arc(0, 3));
  }
  SUBCASE("everything newer than the cutoff leaves an empty graph") {
    const std::vector<std::uint64_t> touch{9, 9, 9, 9};
    CHECK(oracle::materialize_level_graph(g, touch, 5).arc_count() == 0);
  }
}
