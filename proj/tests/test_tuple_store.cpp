#include <algorithm>

#include "apasp/engine.hpp"
#include "apasp/verify.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace apasp;

namespace {

CenterArray ca(std::initializer_list<std::uint64_t> v) {
  CenterArray a;
  std::size_t i = 0;
  for (auto x : v) a[i++] = x;
  return a;
}

Engine::TripleView get(const Engine& e, Vertex x, Vertex y, TupleId id, Weight wt) {
  for (const auto& tv : e.triples(x, y))
    if (tv.id == id && tv.wt == wt) return tv;
  REQUIRE(false);
  return {};
}

bool has(const Engine& e, Vertex x, Vertex y, TupleId id, Weight wt) {
  for (const auto& tv : e.triples(x, y))
    if (tv.id == id && tv.wt == wt) return true;
  return false;
}

}  // namespace

TEST_CASE("removal-side center redistribution") {
  // Arrays written newest level first.
  SUBCASE("mass at or above the resident's oldest level aggregates there") {
    const CenterArray resident = ca({2, 1, 4, 0});
    const CenterArray delta = ca({1, 0, 1, 2});
    const CenterArray out = Engine::cleanup_center_reshape(delta, resident);
    CHECK(out == ca({1, 0, 3, 0}));
    CenterArray rem = resident;
    rem.subtract(out);
    CHECK(rem == ca({1, 1, 1, 0}));
  }
  SUBCASE("delta entirely at the pivot level is unchanged") {
    const CenterArray out = Engine::cleanup_center_reshape(ca({0, 0, 3, 0}), ca({0, 1, 4, 0}));
    CHECK(out == ca({0, 0, 3, 0}));
  }
  SUBCASE("single newer path copies through") {
    const CenterArray out = Engine::cleanup_center_reshape(ca({1, 0, 0, 0}), ca({0, 0, 4, 0}));
    CHECK(out == ca({1, 0, 0, 0}));
  }
  SUBCASE("component underflow faults") {
    CenterArray resident = ca({1, 0, 0, 0});
    CHECK_THROWS_AS(resident.subtract(ca({2, 0, 0, 0})), InconsistencyError);
  }
}

TEST_CASE("creation-side center redistribution") {
  SUBCASE("extension vertex newer than the mass re-centers it") {
    CHECK(Engine::fixup_center_reshape(ca({1, 0, 2, 0}), 1) == ca({1, 2, 0, 0}));
  }
  SUBCASE("extension vertex older than all mass changes nothing") {
    CHECK(Engine::fixup_center_reshape(ca({0, 0, 2, 0}), 3) == ca({0, 0, 2, 0}));
  }
  SUBCASE("already centered at the extension level") {
    CHECK(Engine::fixup_center_reshape(ca({1, 0, 0, 0}), 0) == ca({1, 0, 0, 0}));
  }
}

TEST_CASE("same tuple and weight merge into one triple") {
  // Two interior routes share first edge (0,1) and last edge (4,5).
  Graph g(6);
  g.set_arc(0, 1, Weight(1));
  g.set_arc(1, 2, Weight(1));
  g.set_arc(1, 3, Weight(1));
  g.set_arc(2, 4, Weight(1));
  g.set_arc(3, 4, Weight(1));
  g.set_arc(4, 5, Weight(1));
  Engine e(g);
  const TupleId full{0, 1, 4, 5};
  const auto tv = get(e, 0, 5, full, Weight(4));
  CHECK(tv.p_count == 2);
  CHECK(tv.beta);
  CHECK(tv.s_count == 2);
  CHECK(e.query_sigma(0, 5) == 2);
  CHECK(check_structural(e).empty());
}

TEST_CASE("stored triples for the reference pair") {
  Engine e(testing::g1());
  const auto ts = e.triples(0, 3);
  CHECK(ts.size() == 3);
  CHECK(has(e, 0, 3, TupleId{0, 1, 1, 3}, Weight(2)));
  CHECK(has(e, 0, 3, TupleId{0, 2, 2, 3}, Weight(2)));
  CHECK(has(e, 0, 3, TupleId{0, 3, 0, 3}, Weight(3)));
  // The direct arc is a locally shortest triple but not shortest.
  const auto arc = get(e, 0, 3, TupleId{0, 3, 0, 3}, Weight(3));
  CHECK(!arc.beta);
  CHECK(arc.s_count == 0);
  // Both weight-2 triples are shortest.
  CHECK(get(e, 0, 3, TupleId{0, 1, 1, 3}, Weight(2)).beta);
  CHECK(get(e, 0, 3, TupleId{0, 2, 2, 3}, Weight(2)).beta);
}

TEST_CASE("decrement through an update removes exhausted triples") {
  Engine e(testing::g1());
  e.ffd_update(testing::delete_vertex(1));
  CHECK(!has(e, 0, 3, TupleId{0, 1, 1, 3}, Weight(2)));
  CHECK(has(e, 0, 3, TupleId{0, 2, 2, 3}, Weight(2)));
  CHECK(e.query_distance(0, 3) == Weight(2));
  CHECK(e.query_sigma(0, 3) == 1);
  // The L endpoint of the removed tuple is cleaned up with it.
  CHECK(e.l_set(1, 1, 3).empty());
  CHECK(!e.l_set(2, 2, 3).empty());
  CHECK(check_structural(e).empty());
}

TEST_CASE("beta flags move between stores as distances change") {
  // 0 -> 1 (w 5) direct, and a lighter route through 2 appears later.
  Graph g(3);
  g.set_arc(0, 1, Weight(5));
  Engine e(g);
  CHECK(get(e, 0, 1, TupleId{0, 1, 0, 1}, Weight(5)).beta);

  UpdateEvent add;
  add.v = 2;
  add.in_weights[0] = Weight(1);
  add.out_weights[1] = Weight(1);
  e.ffd_update(add);
  CHECK(e.query_distance(0, 1) == Weight(2));
  // The direct arc stays historical: present in both stores.
  const auto arc = get(e, 0, 1, TupleId{0, 1, 0, 1}, Weight(5));
  CHECK(arc.beta);
  CHECK(arc.s_count == 1);

  e.ffd_update(testing::delete_vertex(2));
  CHECK(e.query_distance(0, 1) == Weight(5));
  CHECK(e.query_sigma(0, 1) == 1);
  CHECK(check_structural(e).empty());
}
