#include "apasp/oracle.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <stdexcept>

namespace apasp::oracle {

SsspResult dijkstra_count(const Graph& g, Vertex s) {
  const std::size_t n = g.order();
  SsspResult r;
  r.dist.assign(n, kInfinity);
  r.sigma.assign(n, 0);
  r.dist[s] = Weight::zero();
  r.sigma[s] = 1;

  using Item = std::pair<Weight, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  pq.emplace(Weight::zero(), s);
  std::vector<bool> done(n, false);

  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (done[u]) continue;
    done[u] = true;
    for (Vertex v = 0; v < n; ++v) {
      const Weight w = (v == u) ? kInfinity : g.arc_weight(u, v);
      if (w.is_infinite()) continue;
      const Weight nd = d + w;
      if (nd < r.dist[v]) {
        r.dist[v] = nd;
        r.sigma[v] = r.sigma[u];
        pq.emplace(nd, v);
      } else if (nd == r.dist[v]) {
        r.sigma[v] += r.sigma[u];
      }
    }
  }
  return r;
}

std::vector<std::vector<Weight>> all_pairs_distances(const Graph& g) {
  std::vector<std::vector<Weight>> d;
  d.reserve(g.order());
  for (Vertex s = 0; s < g.order(); ++s) d.push_back(dijkstra_count(g, s).dist);
  return d;
}

std::vector<std::pair<Vertex, Vertex>> sp_dag_edges(const Graph& g, Vertex s) {
  const auto res = dijkstra_count(g, s);
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex t = 0; t < g.order(); ++t) {
    if (res.dist[t].is_infinite()) continue;
    for (Vertex u = 0; u < g.order(); ++u) {
      if (u == t) continue;
      const Weight w = g.arc_weight(t, u);
      if (w.is_finite() && res.dist[u].is_finite() && res.dist[t] + w == res.dist[u])
        edges.emplace_back(t, u);
    }
  }
  return edges;
}

std::size_t nu_star(const Graph& g) {
  std::size_t best = 0;
  for (Vertex s = 0; s < g.order(); ++s) best = std::max(best, sp_dag_edges(g, s).size());
  return best;
}

std::vector<BigRational> brandes_bc(const Graph& g) {
  const std::size_t n = g.order();
  std::vector<BigRational> bc(n, BigRational(0));

  for (Vertex s = 0; s < n; ++s) {
    const auto res = dijkstra_count(g, s);
    // Reverse topological order of the SP dag = vertices by decreasing distance.
    std::vector<Vertex> order;
    for (Vertex v = 0; v < n; ++v)
      if (res.dist[v].is_finite()) order.push_back(v);
    std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
      if (res.dist[a] != res.dist[b]) return res.dist[a] > res.dist[b];
      return a < b;
    });

    std::vector<BigRational> delta(n, BigRational(0));
    for (Vertex w : order) {
      for (Vertex v = 0; v < n; ++v) {
        if (v == w) continue;
        const Weight e = g.arc_weight(v, w);
        if (e.is_finite() && res.dist[v].is_finite() && res.dist[v] + e == res.dist[w]) {
          delta[v] += BigRational(res.sigma[v], res.sigma[w]) * (1 + delta[w]);
        }
      }
      if (w != s) bc[w] += delta[w];
    }
  }
  return bc;
}

std::vector<BigRational> bc_by_definition(const Graph& g) {
  const std::size_t n = g.order();
  std::vector<std::vector<Weight>> d(n);
  std::vector<std::vector<BigInt>> sig(n);
  for (Vertex s = 0; s < n; ++s) {
    auto r = dijkstra_count(g, s);
    d[s] = std::move(r.dist);
    sig[s] = std::move(r.sigma);
  }
  std::vector<BigRational> bc(n, BigRational(0));
  for (Vertex v = 0; v < n; ++v)
    for (Vertex s = 0; s < n; ++s)
      for (Vertex t = 0; t < n; ++t) {
        if (s == v || t == v || s == t) continue;
        if (d[s][t].is_infinite()) continue;
        if (d[s][v].is_finite() && d[v][t].is_finite() && d[s][v] + d[v][t] == d[s][t])
          bc[v] += BigRational(sig[s][v] * sig[v][t], sig[s][t]);
      }
  return bc;
}

namespace {

// Depth-first enumeration of simple paths with a per-path visitor.
// Positive weights make every LSP simple, so simple paths suffice.
void enumerate_simple_paths(const Graph& g,
                            const std::function<void(const std::vector<Vertex>&, Weight)>& visit) {
  const std::size_t n = g.order();
  std::vector<Vertex> path;
  std::vector<bool> used(n, false);

  std::function<void(Vertex, Weight)> dfs = [&](Vertex u, Weight w) {
    if (path.size() >= 2) visit(path, w);
    if (path.size() == n) return;
    for (Vertex v = 0; v < n; ++v) {
      if (used[v] || v == u) continue;
      const Weight e = g.arc_weight(u, v);
      if (e.is_infinite()) continue;
      used[v] = true;
      path.push_back(v);
      dfs(v, w + e);
      path.pop_back();
      used[v] = false;
    }
  };

  for (Vertex s = 0; s < n; ++s) {
    used[s] = true;
    path.assign(1, s);
    dfs(s, Weight::zero());
    used[s] = false;
  }
}

bool path_is_lsp(const std::vector<Vertex>& p, const Graph& g,
                 const std::vector<std::vector<Weight>>& d) {
  // Every proper subpath shortest <=> both maximal proper subpaths shortest
  // (subpaths of shortest paths are shortest).
  auto segment_weight = [&](std::size_t i, std::size_t j) {
    Weight w = Weight::zero();
    for (std::size_t k = i; k < j; ++k) w = w + g.arc_weight(p[k], p[k + 1]);
    return w;
  };
  const std::size_t k = p.size() - 1;  // arc count
  if (k == 1) return true;             // single arcs have only trivial subpaths
  const Weight prefix = segment_weight(0, k - 1);
  if (prefix != d[p[0]][p[k - 1]]) return false;
  const Weight suffix = segment_weight(1, k);
  return suffix == d[p[1]][p[k]];
}

}  // namespace

Census enumerate_lsps(const Graph& g, std::size_t max_n) {
  if (g.order() > max_n) throw std::invalid_argument("instance too large for exhaustive LSP census");
  const auto d = all_pairs_distances(g);
  Census census;
  enumerate_simple_paths(g, [&](const std::vector<Vertex>& p, Weight w) {
    if (!path_is_lsp(p, g, d)) return;
    const std::size_t k = p.size() - 1;
    TupleKey t{p[0], p[1], p[k - 1], p[k]};
    census[{t, w}] += 1;
  });
  return census;
}

Census enumerate_sps(const Graph& g, std::size_t max_n) {
  if (g.order() > max_n) throw std::invalid_argument("instance too large for exhaustive SP census");
  const auto d = all_pairs_distances(g);
  Census census;
  enumerate_simple_paths(g, [&](const std::vector<Vertex>& p, Weight w) {
    if (w != d[p[0]][p.back()]) return;
    const std::size_t k = p.size() - 1;
    TupleKey t{p[0], p[1], p[k - 1], p[k]};
    census[{t, w}] += 1;
  });
  return census;
}

bool is_lst(const Graph& g, const std::vector<std::vector<Weight>>& d, const TupleKey& t,
            Weight wt) {
  const auto [x, a, b, y] = t;
  const Weight wxa = g.arc_weight(x, a);
  const Weight wby = g.arc_weight(b, y);
  if (wxa.is_infinite() || wby.is_infinite()) return false;
  if (x == b && a == y) return wt == wxa;  // single arc
  if (d[a][b].is_infinite()) return false;
  if (wt != wxa + d[a][b] + wby) return false;
  // Maximal proper subpaths shortest: prefix x..b and suffix a..y.
  if (d[x][b].is_infinite() || d[x][b] != wxa + d[a][b]) return false;
  return d[a][y].is_finite() && d[a][y] == d[a][b] + wby;
}

Graph materialize_level_graph(const Graph& base, const std::vector<std::uint64_t>& last_update,
                              std::uint64_t cutoff_step) {
  Graph r(base.order());
  for (Vertex u = 0; u < base.order(); ++u) {
    if (last_update[u] > cutoff_step) continue;
    for (Vertex v = 0; v < base.order(); ++v) {
      if (v == u || last_update[v] > cutoff_step) continue;
      const Weight w = base.arc_weight(u, v);
      if (w.is_finite()) r.set_arc(u, v, w);
    }
  }
  return r;
}

}  // namespace apasp::oracle
