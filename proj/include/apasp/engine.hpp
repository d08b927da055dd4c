#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "apasp/graph.hpp"
#include "apasp/metrics.hpp"
#include "apasp/tuple_types.hpp"

namespace apasp {

struct EngineOptions {
  /// Keep one graph snapshot per update step (needed by the level-graph
  /// oracle checks and the verify command; off for large bench runs).
  bool retain_history = true;
};

/// Fully dynamic APASP engine: the level-based tuple system plus the
/// cleanup/fixup update procedures, driven one vertex update at a time.
class Engine {
 public:
  explicit Engine(const Graph& initial, EngineOptions opt = {});

  /// One fully dynamic vertex update: activates the step's level, updates
  /// e.v, runs the dummy updates, deactivates folded levels. Resets the
  /// epoch first if 2n updates have elapsed.
  UpdateReport ffd_update(const UpdateEvent& e);

  /// Forced rebuild: clears every store and reconstructs the current graph
  /// with n insert updates. Distances and counts are preserved exactly.
  void reset_epoch();

  Weight query_distance(Vertex x, Vertex y) const;
  std::uint64_t query_sigma(Vertex x, Vertex y) const;

  const Graph& graph() const { return cur_; }
  std::size_t order() const { return cur_.order(); }

  // Level clock.
  std::uint64_t step() const { return t_; }
  std::uint64_t epoch_capacity() const { return 2 * cur_.order(); }
  std::vector<std::size_t> active_levels() const;  // ascending = newest first
  std::size_t current_level() const { return cur_level_; }
  std::uint64_t level_time(std::size_t i) const { return time_of_[i]; }
  std::size_t level_count() const { return r_; }
  std::size_t vertex_center(Vertex u) const;
  std::uint64_t vertex_touch_step(Vertex u) const { return last_touch_[u]; }

  // Extension-set unions for the BC dag construction (deduplicated).
  std::set<Vertex> rstar_union(Vertex x, Vertex y) const;
  std::set<Vertex> lstar_union(Vertex x, Vertex y) const;

  // Metrics.
  const Metrics& cumulative_metrics() const { return cumulative_; }
  std::uint64_t resident_triple_pairs() const { return pair_gauge_; }
  std::uint64_t multilevel_creations() const { return multilevel_creations_; }

  /// Canonical triple dump: one line "x a b y wt count beta centers=[..]"
  /// sorted by (x, y, wt, a, b).
  std::string dump() const;

  // History (retain_history mode): graph after each completed step.
  const std::map<std::uint64_t, Graph>& snapshots() const { return snapshots_; }

  /// Test hook invoked at every first per-pair H_f extraction with the
  /// extracted weight (the Lemma-8 in-flight assertion point).
  void set_first_extraction_hook(std::function<void(Vertex, Vertex, Weight)> h) {
    first_extraction_hook_ = std::move(h);
  }

  /// Test-only: runs the removal phase alone, leaving the system mid-update.
  /// The engine is not usable for further updates afterwards; inspect and
  /// discard.
  void debug_cleanup(Vertex v);

  /// Removal-side center redistribution: the delta mass at levels at or
  /// above the resident's oldest level aggregates there; newer levels copy.
  static CenterArray cleanup_center_reshape(const CenterArray& delta, const CenterArray& resident);
  /// Creation-side redistribution: every path's center becomes the more
  /// recent of its own center and the extension vertex's.
  static CenterArray fixup_center_reshape(const CenterArray& delta, std::size_t ext_center);

  // --- Introspection for tests and the invariant suite ---
  struct TripleView {
    TupleId id;
    Weight wt;
    std::uint64_t p_count;
    CenterArray p_ca;
    bool beta;
    std::uint64_t s_count;
    CenterArray s_ca;
  };
  std::vector<TripleView> triples(Vertex x, Vertex y) const;
  /// P*(x,y) content: (tuple, wt, historical count), ascending (wt, a, b).
  std::vector<std::tuple<TupleId, Weight, std::uint64_t>> pstar_triples(Vertex x, Vertex y) const;
  /// Full global extension registries as (x, b, y, member) / (x, a, b, member).
  std::vector<std::tuple<Vertex, Vertex, Vertex, Vertex>> l_registry() const;
  std::vector<std::tuple<Vertex, Vertex, Vertex, Vertex>> r_registry() const;
  struct DmView {
    Weight wt;
    std::size_t level;
    std::uint64_t time;
    std::uint32_t refs;
  };
  std::vector<DmView> dm_records(Vertex x, Vertex y) const;
  std::set<Vertex> rn_set(Vertex x, Vertex y, Weight wt) const;
  std::set<Vertex> ln_set(Vertex x, Vertex y, Weight wt) const;
  std::set<Vertex> l_set(Vertex x, Vertex b, Vertex y) const;  // L(x, by)
  std::set<Vertex> r_set(Vertex x, Vertex a, Vertex b) const;  // R(xa, b)
  /// Per-level ST store content: (tuple, wt, count centered at the level).
  std::vector<std::tuple<TupleId, Weight, std::uint64_t>> pstar_level(std::size_t level, Vertex x,
                                                                      Vertex y) const;
  std::set<Vertex> lstar_level(std::size_t level, Vertex x, Vertex y) const;
  std::set<Vertex> rstar_level(std::size_t level, Vertex x, Vertex y) const;
  std::set<Vertex> lcstar_level(std::size_t level, Vertex x, Vertex y) const;
  std::set<Vertex> rcstar_level(std::size_t level, Vertex x, Vertex y) const;
  std::vector<std::pair<Vertex, Vertex>> stored_pairs() const;  // pairs with P nonempty

 private:
  enum class Side { kLeft, kRight };

  struct PKey {
    Weight wt;
    std::uint8_t beta;  // 0 sorts before 1
    Vertex a, b;
    friend auto operator<=>(const PKey&, const PKey&) = default;
  };
  struct SKey {
    Weight wt;
    Vertex a, b;
    friend auto operator<=>(const SKey&, const SKey&) = default;
  };
  struct DmRecord {
    std::size_t level = 0;
    std::uint64_t time = 0;   // step at which wt was last the shortest distance
    std::uint32_t refs = 0;   // linked P* triples
  };
  struct PairData {
    std::map<PKey, Triple> p;
    std::map<SKey, Triple*> pstar;
    std::map<Weight, DmRecord> dm;
    std::map<Weight, std::map<Vertex, std::uint32_t>> rn, ln;  // wt -> endpoint -> witnesses
    std::uint64_t dirty_pass = 0;      // P* min rose during this cleanup pass
    std::uint64_t extracted_pass = 0;  // first-extraction latch per fixup pass
  };
  struct LevelStore {
    std::map<std::uint64_t, std::map<SKey, Triple*>> pstar;  // pair -> STs centered here
    std::map<std::uint64_t, std::set<Vertex>> lstar, rstar, lcstar, rcstar;
    void clear() {
      pstar.clear();
      lstar.clear();
      rstar.clear();
      lcstar.clear();
      rcstar.clear();
    }
  };
  struct MarkKey {
    TupleId id;
    Weight wt;
    friend auto operator<=>(const MarkKey&, const MarkKey&) = default;
  };
  struct CleanupEntry {  // working removal delta carried through H_c
    TupleId id;
    bool trivial = false;  // the (v,v) seed
    std::uint64_t lhp = 0, hp = 0;
    CenterArray lhp_ca, hp_ca;
  };
  struct FixupEntry {  // working candidate carried through H_f
    TupleId id;
    std::uint64_t count = 0;
    CenterArray ca;
    bool through_v = false;
    bool resident_seed = false;
  };
  struct Member {  // selected triple to extend
    Triple* tr = nullptr;
    std::uint64_t fresh = 0, restored = 0;
    CenterArray fresh_ca, restored_ca;
    bool through_v = false;
  };

  static std::uint64_t pair_key(Vertex x, Vertex y) {
    return (std::uint64_t(x) << 32) | y;
  }
  static std::uint64_t tri_key(Vertex p, Vertex q, Vertex r) {
    return (std::uint64_t(p) << 42) | (std::uint64_t(q) << 21) | r;
  }

  // State.
  Graph cur_;
  EngineOptions opt_;
  std::uint64_t t_ = 0;
  std::size_t r_ = 0;
  std::size_t cur_level_ = 0;
  std::uint32_t mask_ = 0;  // active level bits
  std::vector<std::uint64_t> time_of_;
  std::vector<std::uint64_t> last_touch_;  // per vertex; 0 = never
  std::unordered_map<std::uint64_t, PairData> pairs_;
  std::unordered_map<std::uint64_t, std::map<Vertex, std::uint32_t>> lreg_, rreg_;
  std::vector<LevelStore> levels_;
  std::set<MarkKey> marked_;
  std::map<TripleKey, std::vector<CleanupEntry>> hc_;
  std::map<TripleKey, std::vector<FixupEntry>> hf_;
  std::uint64_t pass_ = 0;  // ff_update pass counter (dirty/extina stamps)
  std::map<std::uint64_t, Graph> snapshots_;
  Metrics cumulative_;
  Metrics* live_ = nullptr;  // current update's delta
  std::uint64_t pair_gauge_ = 0;
  std::uint64_t multilevel_creations_ = 0;
  std::function<void(Vertex, Vertex, Weight)> first_extraction_hook_;

  // Helpers.
  PairData& pd(Vertex x, Vertex y) { return pairs_[pair_key(x, y)]; }
  const PairData* pd_find(Vertex x, Vertex y) const;
  PairData* pd_find(Vertex x, Vertex y);
  Triple* find_triple(Vertex x, Vertex y, const TupleId& id, Weight wt);
  bool level_active(std::size_t i) const { return (mask_ >> i) & 1u; }
  std::size_t center_of(Vertex u) const;

  Weight pstar_min(const PairData& d) const;
  void touch_gauge_add(const CenterArray& before, const CenterArray& after);

  Triple* insert_fresh_triple(Vertex x, Vertex y, const TupleId& id, Weight wt,
                              std::uint64_t count, const CenterArray& ca);
  void erase_triple(Vertex x, Vertex y, Triple* tr);
  Triple* rekey_beta(PairData& d, Triple* tr, bool beta);
  void register_endpoints(Vertex x, Vertex y, const TupleId& id, Weight wt);
  void unregister_endpoints(Vertex x, Vertex y, const TupleId& id, Weight wt);

  void dm_link(Vertex x, Vertex y, Weight wt);
  void dm_unlink(Vertex x, Vertex y, Weight wt);

  void star_enter_level(Vertex x, Vertex y, Triple* tr, std::size_t level);
  void star_leave_level(Vertex x, Vertex y, Triple* tr, std::size_t level);
  bool pstar_level_empty_at_or_above(Vertex x, Vertex y, std::size_t level) const;

  // Update drive.
  void build_from(const Graph& g);
  void ff_update(Vertex v, const UpdateEvent& e, std::size_t k, bool dummy);
  void deactivate_below(std::size_t k);

  // Cleanup.
  void ff_cleanup(Vertex v);
  void cleanup_extend(const std::vector<CleanupEntry>& s, const TripleKey& key, Side side,
                      Vertex v);
  void apply_removal(Vertex px, Vertex py, Triple* tr, std::uint64_t dl, const CenterArray& cl,
                     std::uint64_t dh, const CenterArray& ch, const TripleKey& pushkey);

  // Fixup.
  void ff_fixup(Vertex v, std::size_t k);
  void ff_populate(Vertex v, std::size_t k);
  std::vector<Member> select_extendable(std::vector<FixupEntry>& sprime, Vertex x, Vertex y,
                                        Weight wt, Vertex v, std::size_t k, std::uint64_t& tau_min);
  void fixup_extend(std::vector<Member>& s, const TripleKey& key, Side side, Vertex v,
                    std::uint64_t tau_min);

 public:
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;
};

}  // namespace apasp
