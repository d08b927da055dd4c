#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <tuple>
#include <vector>

#include "apasp/graph.hpp"

namespace apasp::oracle {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Tuple identity used by census maps: (x, a, b, y) with first edge (x,a) and
/// last edge (b,y); a single arc (u,v) appears as (u, v, u, v).
using TupleKey = std::tuple<Vertex, Vertex, Vertex, Vertex>;

/// Census: (tuple, weight) -> number of represented paths.
using Census = std::map<std::pair<TupleKey, Weight>, BigInt>;

struct SsspResult {
  std::vector<Weight> dist;
  std::vector<BigInt> sigma;
};

/// Dijkstra with shortest-path counting from s. d(s,s)=0, sigma(s,s)=1.
SsspResult dijkstra_count(const Graph& g, Vertex s);

/// All-pairs distance matrix via n Dijkstra runs.
std::vector<std::vector<Weight>> all_pairs_distances(const Graph& g);

/// Exact betweenness centrality per the direct definition, computed with
/// Brandes-style dependency accumulation over per-source SP dags.
std::vector<BigRational> brandes_bc(const Graph& g);

/// Exact BC via the literal triple sum over (s, t, v); quadratic-blowup slow,
/// used only to cross-check brandes_bc on tiny instances.
std::vector<BigRational> bc_by_definition(const Graph& g);

/// Exhaustive LSP census of g: every path whose proper subpaths are all
/// shortest, grouped by (first edge, last edge, weight). Refuses n > max_n.
Census enumerate_lsps(const Graph& g, std::size_t max_n = 10);

/// Shortest-path census of g (paths with weight d(x,y)), same grouping.
Census enumerate_sps(const Graph& g, std::size_t max_n = 10);

/// True iff (tuple, wt) denotes locally shortest paths of g: both edges exist,
/// wt = w(x,a) + d(a,b) + w(b,y), and the maximal proper subpaths are shortest.
bool is_lst(const Graph& g, const std::vector<std::vector<Weight>>& dist,
            const TupleKey& t, Weight wt);

/// Oracle SP dag of source s: edge (t,u) iff d(s,t) + w(t,u) = d(s,u), finite.
std::vector<std::pair<Vertex, Vertex>> sp_dag_edges(const Graph& g, Vertex s);

/// Max over sources of the number of distinct SP-dag edges (the measured
/// nu-star used by the bench reports and the bound checks).
std::size_t nu_star(const Graph& g);

/// Induced subgraph of `base` on the vertices whose last update step is at
/// most `cutoff_step` (per `last_update`): the level graph of that era.
Graph materialize_level_graph(const Graph& base, const std::vector<std::uint64_t>& last_update,
                              std::uint64_t cutoff_step);

}  // namespace apasp::oracle
