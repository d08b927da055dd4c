#pragma once

#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "apasp/graph.hpp"

namespace apasp {

/// Graph text format: first line "n", then one line per arc "u v w" with
/// integer w >= 1; ids 0-based decimal.
Graph parse_graph(std::istream& in);
std::string format_graph(const Graph& g);

struct StreamParse {
  std::vector<UpdateEvent> events;
  std::vector<std::string> errors;  // "<line>: <message>"
};

/// Update stream, one record per line:
///   update <v> | in: u1:w1,u2:w2 | out: u1:w1
/// Omitted sides mean all arcs on that side removed; "inf" is an explicit
/// removal token. Blank lines and lines starting with '#' are skipped.
StreamParse parse_update_stream(std::istream& in);
std::string format_event(const UpdateEvent& e);

/// Seeded Erdos-Renyi digraph: every ordered pair gets an arc with
/// probability p and a uniform weight in [1, wmax].
Graph gen_er(std::uint64_t seed, std::size_t n, double p, std::int64_t wmax);

/// Seeded planted-cluster digraph: dense clusters whose arc weights lie in
/// (delta, 2*delta], joined by a sparse light interconnect. Keeps nu* small
/// against m*.
Graph gen_cluster(std::uint64_t seed, std::size_t n, double p, std::int64_t delta);

/// Seeded mixed update stream against a fixed vertex set: deletions,
/// re-insertions and weight reassignments.
std::vector<UpdateEvent> gen_stream(std::uint64_t seed, std::size_t n, std::size_t count, double p,
                                    std::int64_t wmax);

}  // namespace apasp
