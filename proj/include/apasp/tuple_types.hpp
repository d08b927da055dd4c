#pragma once

#include <array>
#include <cstdint>
#include <tuple>

#include "apasp/weight.hpp"

namespace apasp {

/// First edge (x,a), last edge (b,y). A single arc (u,v) is (u, v, u, v).
struct TupleId {
  Vertex x = 0, a = 0, b = 0, y = 0;

  bool single_arc() const { return x == b && a == y; }

  friend bool operator==(const TupleId&, const TupleId&) = default;
  friend auto operator<=>(const TupleId& l, const TupleId& r) {
    return std::tie(l.x, l.a, l.b, l.y) <=> std::tie(r.x, r.a, r.b, r.y);
  }
};

inline TupleId arc_tuple(Vertex u, Vertex v) { return TupleId{u, v, u, v}; }

constexpr std::size_t kMaxLevels = 24;

/// Per-level path counts; index 0 is the most recent level. The level center
/// is the smallest index with nonzero mass.
class CenterArray {
 public:
  CenterArray() { c_.fill(0); }

  static CenterArray unit(std::size_t level, std::uint64_t count = 1) {
    CenterArray a;
    a.c_[level] = count;
    return a;
  }

  std::uint64_t operator[](std::size_t i) const { return c_[i]; }
  std::uint64_t& operator[](std::size_t i) { return c_[i]; }

  std::uint64_t total() const {
    std::uint64_t s = 0;
    for (auto v : c_) s += v;
    return s;
  }

  bool empty() const {
    for (auto v : c_)
      if (v) return false;
    return true;
  }

  /// Smallest (most recent) index with mass; kMaxLevels when empty.
  std::size_t level_center() const {
    for (std::size_t i = 0; i < kMaxLevels; ++i)
      if (c_[i]) return i;
    return kMaxLevels;
  }

  /// Largest (oldest) index with mass; kMaxLevels when empty.
  std::size_t oldest_level() const {
    for (std::size_t i = kMaxLevels; i-- > 0;)
      if (c_[i]) return i;
    return kMaxLevels;
  }

  void add(const CenterArray& o) {
    for (std::size_t i = 0; i < kMaxLevels; ++i) c_[i] += o.c_[i];
  }

  /// Component-wise subtraction; throws on any negative component.
  void subtract(const CenterArray& o) {
    for (std::size_t i = 0; i < kMaxLevels; ++i) {
      if (o.c_[i] > c_[i]) throw InconsistencyError("center array component underflow");
      c_[i] -= o.c_[i];
    }
  }

  friend bool operator==(const CenterArray&, const CenterArray&) = default;

 private:
  std::array<std::uint64_t, kMaxLevels> c_;
};

/// A triple: tuple + weight + path count, with the LHT-side state (count/
/// centers in P) and the HT-side state (count/centers recorded in P* and the
/// per-level stores). beta <=> the triple is present in P*.
struct Triple {
  TupleId id;
  Weight wt;

  std::uint64_t p_count = 0;  // paths represented in P
  CenterArray p_ca;

  bool beta = false;          // in P* as well
  std::uint64_t s_count = 0;  // paths represented in P*
  CenterArray s_ca;           // per-level mass recorded in the P*_i stores

  std::uint64_t update_num = 0;  // bookkeeping (stored, unread by core logic)
  std::uint64_t num_v_paths = 0;
};

/// Heap / extraction key: lexicographic (wt, x, y).
struct TripleKey {
  Weight wt;
  Vertex x = 0, y = 0;

  friend bool operator==(const TripleKey&, const TripleKey&) = default;
  friend auto operator<=>(const TripleKey& l, const TripleKey& r) {
    return std::tie(l.wt, l.x, l.y) <=> std::tie(r.wt, r.x, r.y);
  }
};

}  // namespace apasp
