#include "apasp/graph.hpp"

namespace apasp {

namespace {

void validate_side(const Graph& g, Vertex v, const std::map<Vertex, Weight>& side) {
  for (const auto& [u, w] : side) {
    if (u >= g.order()) throw std::out_of_range("event references vertex out of range");
    if (u == v) throw std::invalid_argument("self-loop rejected");
    if (w.is_finite() && w.value() <= 0)
      throw std::invalid_argument("finite arc weights must be positive");
  }
}

}  // namespace

Graph apply_weight_assignment(const Graph& g, const UpdateEvent& e) {
  if (e.v >= g.order()) throw std::out_of_range("updated vertex out of range");
  validate_side(g, e.v, e.in_weights);
  validate_side(g, e.v, e.out_weights);

  Graph r = g;
  for (Vertex u = 0; u < g.order(); ++u) {
    if (u == e.v) continue;
    auto in = e.in_weights.find(u);
    r.set_arc(u, e.v, in == e.in_weights.end() ? kInfinity : in->second);
    auto out = e.out_weights.find(u);
    r.set_arc(e.v, u, out == e.out_weights.end() ? kInfinity : out->second);
  }
  return r;
}

UpdateEvent inverse_event(const Graph& g, const UpdateEvent& e) {
  UpdateEvent inv;
  inv.v = e.v;
  for (Vertex u = 0; u < g.order(); ++u) {
    if (u == e.v) continue;
    if (g.has_arc(u, e.v)) inv.in_weights[u] = g.arc_weight(u, e.v);
    if (g.has_arc(e.v, u)) inv.out_weights[u] = g.arc_weight(e.v, u);
  }
  return inv;
}

}  // namespace apasp
