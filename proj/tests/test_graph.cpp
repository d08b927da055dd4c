#include "apasp/graph.hpp"

#include <random>

#include "doctest.h"
#include "test_support.hpp"

using namespace apasp;

TEST_CASE("weight arithmetic") {
  CHECK(Weight(2) + Weight(3) == Weight(5));
  CHECK((Weight(1) + kInfinity).is_infinite());
  CHECK((kInfinity + kInfinity).is_infinite());
  CHECK(Weight(1) < Weight(2));
  CHECK(Weight(7) < kInfinity);
  CHECK(kInfinity.str() == "inf");
  CHECK_THROWS_AS(Weight(INT64_MAX - 1) + Weight(2), std::overflow_error);
}

TEST_CASE("arc accessors and validation") {
  Graph g = testing::g1();
  CHECK(g.arc_weight(0, 3) == Weight(3));
  CHECK(g.arc_weight(3, 0).is_infinite());
  CHECK(g.arc_weight(1, 1).is_infinite());  // self pairs always absent
  CHECK(g.arc_count() == 5);
  CHECK_THROWS_AS(g.set_arc(1, 1, Weight(2)), std::invalid_argument);
  CHECK_THROWS_AS(g.set_arc(0, 1, Weight(0)), std::invalid_argument);
  CHECK_THROWS_AS(g.arc_weight(0, 9), std::out_of_range);
}

TEST_CASE("weight assignment semantics") {
  SUBCASE("insertion into the empty graph") {
    Graph g(5);
    UpdateEvent e;
    e.v = 1;
    e.out_weights[2] = Weight(1);
    e.out_weights[3] = Weight(1);
    e.out_weights[4] = Weight(3);
    Graph r = apply_weight_assignment(g, e);
    CHECK(r.arc_weight(1, 2) == Weight(1));
    CHECK(r.arc_weight(1, 3) == Weight(1));
    CHECK(r.arc_weight(1, 4) == Weight(3));
    CHECK(r.arc_count() == 3);
  }
  SUBCASE("deletion removes exactly the incident arcs") {
    Graph r = apply_weight_assignment(testing::g1(), testing::delete_vertex(1));
    CHECK(!r.has_arc(0, 1));
    CHECK(!r.has_arc(1, 3));
    CHECK(r.has_arc(0, 2));
    CHECK(r.has_arc(2, 3));
    CHECK(r.has_arc(0, 3));
  }
  SUBCASE("delete then re-insert restores the graph") {
    const Graph g = testing::g1();
    Graph del = apply_weight_assignment(g, testing::delete_vertex(1));
    Graph back = apply_weight_assignment(del, testing::reinsert_from(g, 1));
    CHECK(back == g);
  }
  SUBCASE("rejections") {
    UpdateEvent bad;
    bad.v = 0;
    bad.out_weights[1] = Weight(0);
    CHECK_THROWS_AS(apply_weight_assignment(testing::g1(), bad), std::invalid_argument);
    bad.out_weights.clear();
    bad.out_weights[0] = Weight(2);  // self loop
    CHECK_THROWS_AS(apply_weight_assignment(testing::g1(), bad), std::invalid_argument);
    UpdateEvent oor;
    oor.v = 17;
    CHECK_THROWS_AS(apply_weight_assignment(testing::g1(), oor), std::out_of_range);
  }
}

TEST_CASE("event followed by its inverse is the identity") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng() % 6;
    Graph g(n);
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = 0; v < n; ++v)
        if (u != v && rng() % 3 == 0)
          g.set_arc(u, v, Weight(1 + static_cast<std::int64_t>(rng() % 9)));
    UpdateEvent e;
    e.v = static_cast<Vertex>(rng() % n);
    for (Vertex u = 0; u < n; ++u) {
      if (u == e.v) continue;
      if (rng() % 2) e.in_weights[u] = Weight(1 + static_cast<std::int64_t>(rng() % 9));
      if (rng() % 2) e.out_weights[u] = Weight(1 + static_cast<std::int64_t>(rng() % 9));
    }
    const UpdateEvent inv = inverse_event(g, e);
    const Graph there = apply_weight_assignment(g, e);
    const Graph back = apply_weight_assignment(there, inv);
    CHECK(back == g);
  }
}
