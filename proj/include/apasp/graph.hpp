#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "apasp/weight.hpp"

namespace apasp {

/// A fully dynamic vertex update: v plus the complete replacement weights of
/// every arc incident to v. Entries omitted from the maps mean infinity
/// (arc absent). A pure deletion is the event with both maps empty.
struct UpdateEvent {
  Vertex v = 0;
  std::map<Vertex, Weight> in_weights;   // u -> w(u, v)
  std::map<Vertex, Weight> out_weights;  // u -> w(v, u)
};

/// Directed graph on a fixed dense vertex set [0, n) with exact positive
/// integer arc weights. Self-loops and non-positive weights are rejected.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : n_(n), w_(n * n, kInfinity) {}

  std::size_t order() const { return n_; }

  Weight arc_weight(Vertex u, Vertex v) const {
    if (u >= n_ || v >= n_) throw std::out_of_range("vertex id out of range");
    if (u == v) return kInfinity;  // self-loops excluded by convention
    return w_[u * n_ + v];
  }

  bool has_arc(Vertex u, Vertex v) const { return arc_weight(u, v).is_finite(); }

  void set_arc(Vertex u, Vertex v, Weight w) {
    if (u >= n_ || v >= n_) throw std::out_of_range("vertex id out of range");
    if (u == v && w.is_finite()) throw std::invalid_argument("self-loop rejected");
    if (w.is_finite() && w.value() <= 0)
      throw std::invalid_argument("finite arc weights must be positive");
    if (u != v) w_[u * n_ + v] = w;
  }

  std::size_t arc_count() const {
    std::size_t m = 0;
    for (const Weight w : w_)
      if (w.is_finite()) ++m;
    return m;
  }

  std::vector<Vertex> out_neighbors(Vertex u) const {
    std::vector<Vertex> r;
    for (Vertex v = 0; v < n_; ++v)
      if (v != u && w_[u * n_ + v].is_finite()) r.push_back(v);
    return r;
  }

  std::vector<Vertex> in_neighbors(Vertex v) const {
    std::vector<Vertex> r;
    for (Vertex u = 0; u < n_; ++u)
      if (u != v && w_[u * n_ + v].is_finite()) r.push_back(u);
    return r;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.w_ == b.w_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Weight> w_;
};

/// Validates the event against g and returns the graph with all arcs incident
/// to e.v replaced. Weights must be positive; ids must be in range.
Graph apply_weight_assignment(const Graph& g, const UpdateEvent& e);

/// The inverse of e against g: re-applying it to apply_weight_assignment(g, e)
/// restores g.
UpdateEvent inverse_event(const Graph& g, const UpdateEvent& e);

}  // namespace apasp
