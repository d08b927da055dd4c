#include "apasp/engine.hpp"
#include "apasp/verify.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace apasp;

TEST_CASE("step counter drives level activation") {
  Engine e(testing::g1());  // build = 4 inserts, t = 4
  CHECK(e.step() == 4);
  CHECK(e.active_levels() == std::vector<std::size_t>{2});

  e.ffd_update(testing::noop_event(e.graph(), 0));  // t = 5
  CHECK(e.active_levels() == std::vector<std::size_t>{0, 2});
  const auto rep6 = e.ffd_update(testing::noop_event(e.graph(), 1));  // t = 6
  CHECK(rep6.level == 1);
  CHECK(rep6.dummy_updates == 1);  // the single step-5 vertex re-centers
  CHECK(e.active_levels() == std::vector<std::size_t>{1, 2});
  const auto rep7 = e.ffd_update(testing::noop_event(e.graph(), 2));  // t = 7
  CHECK(rep7.level == 0);
  CHECK(rep7.dummy_updates == 0);
  CHECK(e.active_levels() == std::vector<std::size_t>{0, 1, 2});
  const auto rep8 = e.ffd_update(testing::noop_event(e.graph(), 3));  // t = 8
  CHECK(rep8.level == 3);
  CHECK(e.active_levels() == std::vector<std::size_t>{3});

  // After the fold every touched vertex is centered at the new level.
  for (Vertex u = 0; u < 4; ++u) CHECK(e.vertex_center(u) == 3);
}

TEST_CASE("epoch exhaustion triggers a rebuild") {
  Engine e(testing::g1());  // capacity 8, already at t = 4
  for (int i = 0; i < 4; ++i) {
    const auto rep = e.ffd_update(testing::noop_event(e.graph(), 0));
    CHECK(!rep.epoch_reset);
  }
  CHECK(e.step() == 8);
  const auto rep = e.ffd_update(testing::noop_event(e.graph(), 1));
  CHECK(rep.epoch_reset);
  CHECK(e.step() == 5);  // n build inserts plus this update
  CHECK(e.query_distance(0, 3) == Weight(2));
  CHECK(e.query_sigma(0, 3) == 2);
}

TEST_CASE("distance history records") {
  // 0 -> 1 direct (w 3); a lighter route through 2 comes and goes.
  Graph g(3);
  g.set_arc(0, 1, Weight(3));
  Engine e(g);
  auto recs = e.dm_records(0, 1);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].wt == Weight(3));

  UpdateEvent add;
  add.v = 2;
  add.in_weights[0] = Weight(1);
  add.out_weights[1] = Weight(1);
  e.ffd_update(add);
  recs = e.dm_records(0, 1);
  REQUIRE(recs.size() == 2);  // distinct weights coexist
  CHECK(recs[0].wt == Weight(2));
  CHECK(recs[1].wt == Weight(3));
  const auto level_of_2 = recs[0].level;

  // Re-assigning the same weights refreshes the level of the existing record.
  e.ffd_update(testing::noop_event(e.graph(), 2));
  recs = e.dm_records(0, 1);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].wt == Weight(2));
  CHECK(recs[0].level != level_of_2);

  // Removing the last weight-2 witness drops its record.
  e.ffd_update(testing::delete_vertex(2));
  recs = e.dm_records(0, 1);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].wt == Weight(3));
  CHECK(check_structural(e).empty());
}

TEST_CASE("historical extension endpoint sets") {
  Engine e(testing::g1());
  CHECK(e.rn_set(0, 3, Weight(2)) == std::set<Vertex>{1, 2});
  // The single-arc tuple (uv, uv) witnesses its first endpoint.
  CHECK(e.rn_set(0, 3, Weight(3)) == std::set<Vertex>{0});
  CHECK(e.ln_set(0, 3, Weight(2)) == std::set<Vertex>{1, 2});
  CHECK(e.ln_set(0, 3, Weight(3)) == std::set<Vertex>{3});

  e.ffd_update(testing::delete_vertex(1));
  CHECK(e.rn_set(0, 3, Weight(2)) == std::set<Vertex>{2});
}

TEST_CASE("per-level stores migrate under dummy updates") {
  Engine e(testing::g1());
  // t = 4: everything in the build sits at level 2.
  for (const auto& [x, y] : e.stored_pairs()) {
    for (std::size_t i : e.active_levels()) {
      for (const auto& [id, wt, c] : e.pstar_level(i, x, y)) CHECK(i == 2);
    }
  }
  // A real update at t = 5 puts its content at level 0, leaving the rest.
  e.ffd_update(testing::noop_event(e.graph(), 1));
  bool level0 = false, level2 = false;
  for (const auto& [x, y] : e.stored_pairs()) {
    if (!e.pstar_level(0, x, y).empty()) level0 = true;
    if (!e.pstar_level(2, x, y).empty()) level2 = true;
  }
  CHECK(level0);
  CHECK(level2);
  CHECK(check_structural(e).empty());
}
