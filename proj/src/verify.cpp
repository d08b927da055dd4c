#include "apasp/verify.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "apasp/bc.hpp"
#include "apasp/oracle.hpp"

namespace apasp {

namespace {

std::string tuple_str(const TupleId& id, Weight wt) {
  std::ostringstream os;
  os << '(' << id.x << ' ' << id.a << ',' << id.b << ' ' << id.y << ")@" << wt.str();
  return os.str();
}

}  // namespace

std::vector<std::string> check_structural(const Engine& e) {
  std::vector<std::string> bad;
  auto fail = [&](std::string msg) { bad.push_back(std::move(msg)); };

  const std::uint64_t t = e.step();
  // Level clock: active levels are exactly the set bits of t.
  {
    const auto act = e.active_levels();
    std::vector<std::size_t> expect;
    for (std::size_t i = 0; i < e.level_count(); ++i)
      if ((t >> i) & 1) expect.push_back(i);
    if (act != expect) fail("active levels do not match the bits of t");
    for (Vertex u = 0; u < e.order(); ++u) {
      if (e.vertex_touch_step(u) == 0) continue;
      const std::size_t c = e.vertex_center(u);
      if (!((t >> c) & 1)) fail("vertex centered at an inactive level");
    }
  }

  const auto pairs = e.stored_pairs();
  for (const auto& [x, y] : pairs) {
    std::map<Weight, std::uint64_t> pstar_at_weight;
    std::map<Weight, std::set<Vertex>> rn_expect, ln_expect;
    for (const auto& tv : e.triples(x, y)) {
      if (tv.p_count == 0) fail(tuple_str(tv.id, tv.wt) + ": zero-count triple stored");
      if (tv.p_ca.total() != tv.p_count)
        fail(tuple_str(tv.id, tv.wt) + ": center array sum != count");
      if (tv.s_ca.total() != tv.s_count)
        fail(tuple_str(tv.id, tv.wt) + ": historical center array sum != historical count");
      if (tv.s_count > tv.p_count)
        fail(tuple_str(tv.id, tv.wt) + ": historical count exceeds count");
      if (tv.beta != (tv.s_count > 0))
        fail(tuple_str(tv.id, tv.wt) + ": beta flag inconsistent with P* count");
      for (std::size_t i = 0; i < kMaxLevels; ++i) {
        if (tv.s_ca[i] > tv.p_ca[i])
          fail(tuple_str(tv.id, tv.wt) + ": level mass in P* exceeds P");
        if (tv.p_ca[i] > 0 && !((t >> i) & 1))
          fail(tuple_str(tv.id, tv.wt) + ": center mass at an inactive level");
      }
      if (tv.beta) pstar_at_weight[tv.wt] += 1;
      rn_expect[tv.wt].insert(tv.id.b);
      ln_expect[tv.wt].insert(tv.id.a);
    }

    // beta <=> P* membership with matching counts.
    std::map<std::pair<Weight, std::pair<Vertex, Vertex>>, std::uint64_t> star_map;
    for (const auto& [id, wt, c] : e.pstar_triples(x, y)) star_map[{wt, {id.a, id.b}}] = c;
    for (const auto& tv : e.triples(x, y)) {
      auto it = star_map.find({tv.wt, {tv.id.a, tv.id.b}});
      if (tv.beta && it == star_map.end())
        fail(tuple_str(tv.id, tv.wt) + ": beta set but absent from P*");
      if (!tv.beta && it != star_map.end())
        fail(tuple_str(tv.id, tv.wt) + ": beta clear but present in P*");
      if (tv.beta && it != star_map.end() && it->second != tv.s_count)
        fail(tuple_str(tv.id, tv.wt) + ": P* count mismatch");
    }

    // DM: every record witnessed, min record = current distance, length <= r.
    const auto dm = e.dm_records(x, y);
    if (dm.size() > e.level_count()) fail("distance history longer than the level count");
    std::map<Weight, std::uint64_t> star_weight_refs;
    for (const auto& [id, wt, c] : e.pstar_triples(x, y)) star_weight_refs[wt] += 1;
    for (const auto& rec : dm) {
      if (rec.refs == 0) fail("distance-history record with no linked triples");
      auto it = star_weight_refs.find(rec.wt);
      if (it == star_weight_refs.end() || it->second != rec.refs)
        fail("distance-history record refs mismatch at weight " + rec.wt.str());
    }
    for (const auto& [wt, refs] : star_weight_refs)
      if (!std::any_of(dm.begin(), dm.end(), [&](const auto& r) { return r.wt == wt; }))
        fail("P* weight without a distance-history record: " + wt.str());
    if (!dm.empty() && e.query_distance(x, y) != dm.front().wt)
      fail("distance-history min record differs from the current distance");

    // RN / LN exactness.
    for (const auto& [wt, expect] : rn_expect)
      if (e.rn_set(x, y, wt) != expect) fail("RN mismatch at weight " + wt.str());
    for (const auto& [wt, expect] : ln_expect)
      if (e.ln_set(x, y, wt) != expect) fail("LN mismatch at weight " + wt.str());
  }

  // Global L/R registries: exactly the witnesses of stored triples.
  {
    std::vector<std::tuple<Vertex, Vertex, Vertex, Vertex>> lexp, rexp;
    for (const auto& [x, y] : pairs)
      for (const auto& tv : e.triples(x, y)) {
        lexp.emplace_back(tv.id.a, tv.id.b, tv.id.y, tv.id.x);
        rexp.emplace_back(tv.id.x, tv.id.a, tv.id.b, tv.id.y);
      }
    auto uniq = [](auto& v) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    uniq(lexp);
    uniq(rexp);
    if (e.l_registry() != lexp) fail("L extension registry differs from P content");
    if (e.r_registry() != rexp) fail("R extension registry differs from P content");
  }

  // Per-level stores: P*_i contents equal the triples with mass at i.
  for (const std::size_t i : e.active_levels()) {
    for (const auto& [x, y] : pairs) {
      std::map<std::pair<std::pair<Vertex, Vertex>, Weight>, std::uint64_t> expect;
      for (const auto& tv : e.triples(x, y))
        if (tv.s_ca[i] > 0) expect[{{tv.id.a, tv.id.b}, tv.wt}] = tv.s_ca[i];
      std::map<std::pair<std::pair<Vertex, Vertex>, Weight>, std::uint64_t> got;
      for (const auto& [id, wt, c] : e.pstar_level(i, x, y)) {
        if (c == 0) fail("empty-level entry in P*_" + std::to_string(i));
        got[{{id.a, id.b}, wt}] = c;
      }
      if (expect != got)
        fail("P*_" + std::to_string(i) + "(" + std::to_string(x) + "," + std::to_string(y) +
             ") does not match triple level mass");
    }
  }
  return bad;
}

namespace {

// Exhaustive per-level centered-ST census of a materialized level graph:
// SPs of gamma_i whose center (most recent vertex level) equals i.
oracle::Census level_centered_census(const Graph& level_graph, const Engine& e, std::size_t i) {
  oracle::Census census;
  const auto d = oracle::all_pairs_distances(level_graph);
  const std::size_t n = level_graph.order();
  std::vector<Vertex> path;
  std::vector<bool> used(n, false);
  std::function<void(Vertex, Weight)> dfs = [&](Vertex u, Weight w) {
    if (path.size() >= 2) {
      const Vertex s = path.front();
      if (w == d[s][u]) {
        std::size_t center = kMaxLevels;
        for (Vertex q : path) center = std::min(center, e.vertex_center(q));
        if (center == i) {
          const std::size_t k = path.size() - 1;
          census[{{s, path[1], path[k - 1], u}, w}] += 1;
        }
      }
    }
    for (Vertex vv = 0; vv < n; ++vv) {
      if (used[vv] || vv == u) continue;
      const Weight we = level_graph.arc_weight(u, vv);
      if (we.is_infinite()) continue;
      used[vv] = true;
      path.push_back(vv);
      dfs(vv, w + we);
      path.pop_back();
      used[vv] = false;
    }
  };
  for (Vertex s = 0; s < n; ++s) {
    used[s] = true;
    path.assign(1, s);
    dfs(s, Weight::zero());
    used[s] = false;
  }
  return census;
}

}  // namespace

std::string verify_against_oracle(const Engine& e, const VerifyOptions& opt) {
  const std::size_t n = e.order();
  const Graph& g = e.graph();
  std::ostringstream os;

  // Distances and counts, every pair.
  for (Vertex s = 0; s < n; ++s) {
    const auto res = oracle::dijkstra_count(g, s);
    for (Vertex t = 0; t < n; ++t) {
      if (s == t) continue;
      const Weight ed = e.query_distance(s, t);
      if (ed != res.dist[t]) {
        os << "distance mismatch at (" << s << "," << t << "): engine " << ed.str() << " oracle "
           << res.dist[t].str();
        return os.str();
      }
      const oracle::BigInt esig = e.query_sigma(s, t);
      const oracle::BigInt osig = res.dist[t].is_infinite() ? 0 : res.sigma[t];
      if (esig != osig) {
        os << "sigma mismatch at (" << s << "," << t << "): engine " << esig << " oracle " << osig;
        return os.str();
      }
    }
  }

  if (opt.check_bc) {
    const auto obc = oracle::brandes_bc(g);
    const auto ebc = accumulate_bc(e, BcMode::kRational);
    for (Vertex v = 0; v < n; ++v)
      if (ebc.exact[v] != obc[v]) {
        os << "BC mismatch at " << v;
        return os.str();
      }
  }

  if (opt.check_invariants) {
    const auto bad = check_structural(e);
    if (!bad.empty()) {
      os << "structural: " << bad.front();
      return os.str();
    }
  }

  if (opt.check_censuses && n <= opt.census_max_n) {
    // LST content of P == exhaustive LSP census (historical-only entries are
    // not LSTs of the current graph and are filtered by the LST predicate).
    const auto dist = oracle::all_pairs_distances(g);
    const auto census = oracle::enumerate_lsps(g, opt.census_max_n);
    oracle::Census engine_lsts;
    for (const auto& [x, y] : e.stored_pairs())
      for (const auto& tv : e.triples(x, y)) {
        const oracle::TupleKey key{tv.id.x, tv.id.a, tv.id.b, tv.id.y};
        if (oracle::is_lst(g, dist, key, tv.wt)) engine_lsts[{key, tv.wt}] = tv.p_count;
      }
    if (engine_lsts != census) {
      for (const auto& [key, cnt] : census) {
        auto it = engine_lsts.find(key);
        if (it == engine_lsts.end()) {
          const auto& [tk, wt] = key;
          os << "LSP census entry missing from P: (" << std::get<0>(tk) << ' ' << std::get<1>(tk)
             << ',' << std::get<2>(tk) << ' ' << std::get<3>(tk) << ")@" << wt.str() << " count "
             << cnt;
          return os.str();
        }
        if (it->second != cnt) {
          const auto& [tk, wt] = key;
          os << "LST count mismatch at (" << std::get<0>(tk) << ' ' << std::get<1>(tk) << ','
             << std::get<2>(tk) << ' ' << std::get<3>(tk) << ")@" << wt.str() << ": engine "
             << it->second << " oracle " << cnt;
          return os.str();
        }
      }
      for (const auto& [key, cnt] : engine_lsts)
        if (!census.count(key)) {
          const auto& [tk, wt] = key;
          os << "P holds an LST the census lacks: (" << std::get<0>(tk) << ' ' << std::get<1>(tk)
             << ',' << std::get<2>(tk) << ' ' << std::get<3>(tk) << ")@" << wt.str() << " count "
             << cnt;
          return os.str();
        }
    }

    // Per active level: P*_i equals the centered-ST census of gamma_i.
    if (!e.snapshots().empty()) {
      for (const std::size_t i : e.active_levels()) {
        const std::uint64_t ti = e.level_time(i);
        auto snap = e.snapshots().find(ti);
        if (snap == e.snapshots().end()) continue;
        std::vector<std::uint64_t> touches(n);
        for (Vertex u = 0; u < n; ++u) touches[u] = e.vertex_touch_step(u);
        const Graph gi = oracle::materialize_level_graph(snap->second, touches, ti);
        const auto expect = level_centered_census(gi, e, i);
        oracle::Census got;
        for (const auto& [x, y] : e.stored_pairs())
          for (const auto& [id, wt, c] : e.pstar_level(i, x, y))
            if (c > 0) got[{{id.x, id.a, id.b, id.y}, wt}] += c;
        if (expect != got) {
          os << "level " << i << " centered-ST census mismatch (" << got.size() << " stored vs "
             << expect.size() << " expected groups)";
          for (const auto& [key, cnt] : expect)
            if (!got.count(key) || got[key] != cnt) {
              const auto& [tk, wt] = key;
              os << "; first diff (" << std::get<0>(tk) << ' ' << std::get<1>(tk) << ','
                 << std::get<2>(tk) << ' ' << std::get<3>(tk) << ")@" << wt.str() << " expect "
                 << cnt << " got " << (got.count(key) ? got[key] : 0);
              break;
            }
          for (const auto& [key, cnt] : got)
            if (!expect.count(key)) {
              const auto& [tk, wt] = key;
              os << "; stored extra (" << std::get<0>(tk) << ' ' << std::get<1>(tk) << ','
                 << std::get<2>(tk) << ' ' << std::get<3>(tk) << ")@" << wt.str() << " count "
                 << cnt;
              break;
            }
          return os.str();
        }
      }
    }
  }
  return {};
}

}  // namespace apasp
