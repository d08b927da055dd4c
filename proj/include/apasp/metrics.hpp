#pragma once

#include <cstdint>

namespace apasp {

/// Instrumentation counters. "touched" counts heap entries processed plus
/// resident triples mutated; "triple pairs" are (triple, level) slots with
/// nonzero center mass (the paper's X when newly created).
struct Metrics {
  std::uint64_t triples_touched = 0;
  std::uint64_t triples_removed = 0;
  std::uint64_t triple_pairs_created = 0;
  std::uint64_t heap_ops = 0;
  std::uint64_t he_lookups = 0;

  Metrics& operator+=(const Metrics& o) {
    triples_touched += o.triples_touched;
    triples_removed += o.triples_removed;
    triple_pairs_created += o.triple_pairs_created;
    heap_ops += o.heap_ops;
    he_lookups += o.he_lookups;
    return *this;
  }
};

struct UpdateReport {
  std::uint64_t step = 0;      // t within the epoch
  std::size_t level = 0;       // activated level k
  std::size_t dummy_updates = 0;
  bool epoch_reset = false;
  Metrics delta;               // this update only
};

}  // namespace apasp
