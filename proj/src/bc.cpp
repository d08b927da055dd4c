#include "apasp/bc.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace apasp {

SPDag build_sp_dag(const Engine& engine, Vertex s) {
  const std::size_t n = engine.order();
  SPDag dag;
  dag.source = s;
  dag.succ.assign(n, {});
  dag.sigma.assign(n, 0);

  std::vector<Weight> dist(n);
  for (Vertex t = 0; t < n; ++t) dist[t] = engine.query_distance(s, t);

  for (Vertex t = 0; t < n; ++t) {
    if (dist[t].is_infinite()) continue;
    for (Vertex u : engine.rstar_union(s, t)) {
      if (u == t) continue;
      const Weight w = engine.graph().arc_weight(t, u);
      if (w.is_finite() && dist[u].is_finite() && dist[t] + w == dist[u])
        dag.succ[t].push_back(u);
    }
  }

  // Path counts by increasing distance (topological for positive weights).
  std::vector<Vertex> order;
  for (Vertex t = 0; t < n; ++t)
    if (dist[t].is_finite()) order.push_back(t);
  std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
    if (dist[a] != dist[b]) return dist[a] < dist[b];
    return a < b;
  });
  dag.sigma[s] = 1;
  for (Vertex t : order)
    for (Vertex u : dag.succ[t]) dag.sigma[u] += dag.sigma[t];
  return dag;
}

BCScores accumulate_bc(const Engine& engine, BcMode mode) {
  const std::size_t n = engine.order();
  BCScores out;
  out.mode = mode;
  if (mode == BcMode::kRational)
    out.exact.assign(n, BigRational(0));
  else
    out.approx.assign(n, 0.0L);

  for (Vertex s = 0; s < n; ++s) {
    SPDag dag = build_sp_dag(engine, s);
    std::vector<Weight> dist(n);
    for (Vertex t = 0; t < n; ++t) dist[t] = engine.query_distance(s, t);
    std::vector<Vertex> order;
    for (Vertex t = 0; t < n; ++t)
      if (dist[t].is_finite()) order.push_back(t);
    std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
      if (dist[a] != dist[b]) return dist[a] > dist[b];
      return a < b;
    });

    if (mode == BcMode::kRational) {
      std::vector<BigRational> delta(n, BigRational(0));
      for (Vertex t : order) {
        for (Vertex u : dag.succ[t])
          delta[t] += BigRational(dag.sigma[t], dag.sigma[u]) * (1 + delta[u]);
        if (t != s) out.exact[t] += delta[t];
      }
    } else {
      std::vector<long double> sig(n, 0.0L), delta(n, 0.0L);
      for (Vertex t = 0; t < n; ++t) sig[t] = dag.sigma[t].convert_to<long double>();
      for (Vertex t : order) {
        for (Vertex u : dag.succ[t]) delta[t] += sig[t] / sig[u] * (1.0L + delta[u]);
        if (t != s) out.approx[t] += delta[t];
      }
    }
  }
  return out;
}

std::string format_bc(const BCScores& scores, int decimal_digits) {
  std::ostringstream os;
  if (scores.mode == BcMode::kRational) {
    for (std::size_t v = 0; v < scores.exact.size(); ++v) {
      os << v << '\t' << boost::multiprecision::numerator(scores.exact[v]) << '/'
         << boost::multiprecision::denominator(scores.exact[v]) << '\n';
    }
  } else {
    os << std::fixed << std::setprecision(decimal_digits);
    for (std::size_t v = 0; v < scores.approx.size(); ++v)
      os << v << '\t' << static_cast<double>(scores.approx[v]) << '\n';
  }
  return os.str();
}

}  // namespace apasp
