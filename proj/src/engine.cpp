#include "apasp/engine.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <sstream>

namespace apasp {

namespace {

std::size_t lsb(std::uint64_t t) { return static_cast<std::size_t>(std::countr_zero(t)); }

Metrics metrics_delta(const Metrics& after, const Metrics& before) {
  Metrics d;
  d.triples_touched = after.triples_touched - before.triples_touched;
  d.triples_removed = after.triples_removed - before.triples_removed;
  d.triple_pairs_created = after.triple_pairs_created - before.triple_pairs_created;
  d.heap_ops = after.heap_ops - before.heap_ops;
  d.he_lookups = after.he_lookups - before.he_lookups;
  return d;
}

constexpr std::uint64_t kNoEra = ~std::uint64_t{0};  // "weight never shortest" sentinel

}  // namespace

Engine::Engine(const Graph& initial, EngineOptions opt) : opt_(opt) {
  const std::size_t n = initial.order();
  if (n == 0) throw std::invalid_argument("engine needs at least one vertex");
  r_ = std::bit_width(2 * n);
  if (r_ > kMaxLevels) throw std::invalid_argument("graph too large for the level array cap");
  cur_ = Graph(n);
  levels_.resize(r_);
  live_ = &cumulative_;
  build_from(initial);
}

void Engine::build_from(const Graph& g) {
  const std::size_t n = g.order();
  cur_ = Graph(n);
  t_ = 0;
  mask_ = 0;
  cur_level_ = 0;
  time_of_.assign(r_, 0);
  last_touch_.assign(n, 0);
  pairs_.clear();
  lreg_.clear();
  rreg_.clear();
  for (auto& l : levels_) l.clear();
  marked_.clear();
  hc_.clear();
  hf_.clear();
  snapshots_.clear();
  pair_gauge_ = 0;

  // n insert updates, oldest vertex first. Each insert activates only the
  // arcs between v and the already inserted vertices.
  for (Vertex v = 0; v < n; ++v) {
    UpdateEvent ev;
    ev.v = v;
    for (Vertex u = 0; u < v; ++u) {
      if (g.has_arc(u, v)) ev.in_weights[u] = g.arc_weight(u, v);
      if (g.has_arc(v, u)) ev.out_weights[u] = g.arc_weight(v, u);
    }
    ffd_update(ev);
  }
}

UpdateReport Engine::ffd_update(const UpdateEvent& e) {
  UpdateReport rep;
  if (t_ == epoch_capacity()) {
    reset_epoch();
    rep.epoch_reset = true;
  }
  const Metrics before = cumulative_;

  t_ += 1;
  const std::size_t k = lsb(t_);
  mask_ |= 1u << k;
  time_of_[k] = t_;
  cur_level_ = k;
  rep.step = t_;
  rep.level = k;

  ff_update(e.v, e, k, false);

  // Dummy updates: every vertex last touched in the folded window, most
  // recent first, gets removed and reinserted at level k.
  const std::uint64_t window_lo = t_ - (std::uint64_t{1} << k);  // exclusive
  std::vector<std::pair<std::uint64_t, Vertex>> pending;
  for (Vertex u = 0; u < cur_.order(); ++u)
    if (last_touch_[u] > window_lo && last_touch_[u] < t_) pending.emplace_back(last_touch_[u], u);
  std::sort(pending.begin(), pending.end(), std::greater<>());
  for (auto [touch, u] : pending) {
    UpdateEvent dummy;
    dummy.v = u;
    for (Vertex w = 0; w < cur_.order(); ++w) {
      if (w == u) continue;
      if (cur_.has_arc(w, u)) dummy.in_weights[w] = cur_.arc_weight(w, u);
      if (cur_.has_arc(u, w)) dummy.out_weights[w] = cur_.arc_weight(u, w);
    }
    ff_update(u, dummy, k, true);
    rep.dummy_updates++;
  }

  deactivate_below(k);
  if (opt_.retain_history) snapshots_[t_] = cur_;
  rep.delta = metrics_delta(cumulative_, before);
  return rep;
}

void Engine::reset_epoch() {
  const Graph keep = cur_;
  build_from(keep);
}

void Engine::ff_update(Vertex v, const UpdateEvent& e, std::size_t k, bool /*dummy*/) {
  pass_ += 1;
  ff_cleanup(v);
  cur_ = apply_weight_assignment(cur_, e);
  last_touch_[v] = t_;
  ff_fixup(v, k);
}

void Engine::deactivate_below(std::size_t k) {
  for (Vertex u = 0; u < cur_.order(); ++u)
    if (last_touch_[u] > 0 && center_of(u) < k)
      throw InconsistencyError("vertex still centered below the deactivation point");
  for (std::size_t j = 0; j < k; ++j) levels_[j].clear();
  mask_ &= ~((1u << k) - 1);
}

// --- small helpers ---------------------------------------------------------

const Engine::PairData* Engine::pd_find(Vertex x, Vertex y) const {
  auto it = pairs_.find(pair_key(x, y));
  return it == pairs_.end() ? nullptr : &it->second;
}

Engine::PairData* Engine::pd_find(Vertex x, Vertex y) {
  auto it = pairs_.find(pair_key(x, y));
  return it == pairs_.end() ? nullptr : &it->second;
}

Triple* Engine::find_triple(Vertex x, Vertex y, const TupleId& id, Weight wt) {
  PairData* d = pd_find(x, y);
  if (!d) return nullptr;
  for (std::uint8_t beta : {0, 1}) {
    auto it = d->p.find(PKey{wt, beta, id.a, id.b});
    if (it != d->p.end() && it->second.id == id) return &it->second;
  }
  return nullptr;
}

std::size_t Engine::center_of(Vertex u) const {
  if (last_touch_[u] == 0) return r_ - 1;
  return lsb(last_touch_[u]);
}

std::size_t Engine::vertex_center(Vertex u) const { return center_of(u); }

Weight Engine::pstar_min(const PairData& d) const {
  return d.pstar.empty() ? kInfinity : d.pstar.begin()->first.wt;
}

void Engine::touch_gauge_add(const CenterArray& before, const CenterArray& added) {
  for (std::size_t i = 0; i < kMaxLevels; ++i)
    if (added[i] > 0 && before[i] == 0) {
      pair_gauge_++;
      live_->triple_pairs_created++;
    }
}

Triple* Engine::insert_fresh_triple(Vertex x, Vertex y, const TupleId& id, Weight wt,
                                    std::uint64_t count, const CenterArray& ca) {
  PairData& d = pd(x, y);
  auto [it, fresh] = d.p.try_emplace(PKey{wt, 0, id.a, id.b});
  if (!fresh) throw InconsistencyError("fresh triple already present");
  Triple& tr = it->second;
  tr.id = id;
  tr.wt = wt;
  tr.p_count = count;
  tr.p_ca = ca;
  tr.beta = false;
  tr.s_count = 0;
  tr.s_ca = CenterArray{};
  tr.update_num = t_;
  tr.num_v_paths = 1;
  touch_gauge_add(CenterArray{}, ca);
  register_endpoints(x, y, id, wt);
  live_->triples_touched++;
  return &tr;
}

void Engine::erase_triple(Vertex x, Vertex y, Triple* tr) {
  PairData& d = pd(x, y);
  d.p.erase(PKey{tr->wt, tr->beta ? std::uint8_t{1} : std::uint8_t{0}, tr->id.a, tr->id.b});
}

Triple* Engine::rekey_beta(PairData& d, Triple* tr, bool beta) {
  if (tr->beta == beta) return tr;
  auto node = d.p.extract(PKey{tr->wt, tr->beta ? std::uint8_t{1} : std::uint8_t{0}, tr->id.a, tr->id.b});
  if (node.empty()) throw InconsistencyError("rekey: triple not found under its key");
  node.key().beta = beta ? 1 : 0;
  Triple* addr = &node.mapped();
  addr->beta = beta;
  d.p.insert(std::move(node));
  return addr;
}

void Engine::register_endpoints(Vertex x, Vertex y, const TupleId& id, Weight wt) {
  lreg_[tri_key(id.a, id.b, id.y)][id.x]++;
  rreg_[tri_key(id.x, id.a, id.b)][id.y]++;
  PairData& d = pd(x, y);
  d.rn[wt][id.b]++;
  d.ln[wt][id.a]++;
}

void Engine::unregister_endpoints(Vertex x, Vertex y, const TupleId& id, Weight wt) {
  auto drop = [](auto& outer, std::uint64_t key, Vertex member) {
    auto it = outer.find(key);
    if (it == outer.end()) throw InconsistencyError("extension registry entry missing");
    auto mit = it->second.find(member);
    if (mit == it->second.end() || mit->second == 0)
      throw InconsistencyError("extension registry count missing");
    if (--mit->second == 0) it->second.erase(mit);
    if (it->second.empty()) outer.erase(it);
  };
  drop(lreg_, tri_key(id.a, id.b, id.y), id.x);
  drop(rreg_, tri_key(id.x, id.a, id.b), id.y);

  PairData& d = pd(x, y);
  auto dropw = [&](auto& m, Vertex member) {
    auto it = m.find(wt);
    if (it == m.end()) throw InconsistencyError("historical-extension entry missing");
    auto mit = it->second.find(member);
    if (mit == it->second.end() || mit->second == 0)
      throw InconsistencyError("historical-extension count missing");
    if (--mit->second == 0) it->second.erase(mit);
    if (it->second.empty()) m.erase(it);
  };
  dropw(d.rn, id.b);
  dropw(d.ln, id.a);
}

void Engine::dm_link(Vertex x, Vertex y, Weight wt) {
  PairData& d = pd(x, y);
  auto [it, fresh] = d.dm.try_emplace(wt);
  if (fresh) {
    it->second.level = cur_level_;
    it->second.time = t_;
  }
  it->second.refs++;
}

void Engine::dm_unlink(Vertex x, Vertex y, Weight wt) {
  PairData& d = pd(x, y);
  auto it = d.dm.find(wt);
  if (it == d.dm.end() || it->second.refs == 0)
    throw InconsistencyError("distance-history record missing on unlink");
  if (--it->second.refs == 0) d.dm.erase(it);
}

bool Engine::pstar_level_empty_at_or_above(Vertex x, Vertex y, std::size_t level) const {
  const std::uint64_t pk = pair_key(x, y);
  for (std::size_t j = level; j < r_; ++j) {
    if (!level_active(j)) continue;
    auto it = levels_[j].pstar.find(pk);
    if (it != levels_[j].pstar.end() && !it->second.empty()) return false;
  }
  return true;
}

void Engine::star_enter_level(Vertex x, Vertex y, Triple* tr, std::size_t level) {
  LevelStore& L = levels_[level];
  const std::uint64_t pk = pair_key(x, y);
  L.pstar[pk][SKey{tr->wt, tr->id.a, tr->id.b}] = tr;
  const auto [X, A, B, Y] = std::tuple{tr->id.x, tr->id.a, tr->id.b, tr->id.y};
  L.lstar[pair_key(A, Y)].insert(X);
  if (center_of(X) == level) L.lcstar[pair_key(A, Y)].insert(X);
  L.rstar[pair_key(X, B)].insert(Y);
  if (center_of(Y) == level) L.rcstar[pair_key(X, B)].insert(Y);
}

void Engine::star_leave_level(Vertex x, Vertex y, Triple* tr, std::size_t level) {
  LevelStore& L = levels_[level];
  const std::uint64_t pk = pair_key(x, y);
  auto it = L.pstar.find(pk);
  if (it != L.pstar.end()) {
    it->second.erase(SKey{tr->wt, tr->id.a, tr->id.b});
    if (it->second.empty()) L.pstar.erase(it);
  }
  const auto [X, A, B, Y] = std::tuple{tr->id.x, tr->id.a, tr->id.b, tr->id.y};
  auto erase_from = [&](auto& table, std::uint64_t key, Vertex member) {
    auto sit = table.find(key);
    if (sit == table.end()) return;
    sit->second.erase(member);
    if (sit->second.empty()) table.erase(sit);
  };
  // Left-extension bookkeeping for the suffix pair (A, Y).
  if (center_of(X) == level) {
    if (pstar_level_empty_at_or_above(A, Y, level)) {
      erase_from(L.lstar, pair_key(A, Y), X);
      erase_from(L.lcstar, pair_key(A, Y), X);
    }
  } else {
    auto pit = L.pstar.find(pair_key(A, Y));
    if (pit == L.pstar.end() || pit->second.empty()) {
      erase_from(L.lstar, pair_key(A, Y), X);
      erase_from(L.lcstar, pair_key(A, Y), X);  // keep LC* within L*
    }
  }
  // Right-extension bookkeeping for the prefix pair (X, B).
  if (center_of(Y) == level) {
    if (pstar_level_empty_at_or_above(X, B, level)) {
      erase_from(L.rstar, pair_key(X, B), Y);
      erase_from(L.rcstar, pair_key(X, B), Y);
    }
  } else {
    auto pit = L.pstar.find(pair_key(X, B));
    if (pit == L.pstar.end() || pit->second.empty()) {
      erase_from(L.rstar, pair_key(X, B), Y);
      erase_from(L.rcstar, pair_key(X, B), Y);
    }
  }
}

// --- cleanup ---------------------------------------------------------------

CenterArray Engine::cleanup_center_reshape(const CenterArray& delta, const CenterArray& resident) {
  const std::size_t j = resident.oldest_level();
  if (j == kMaxLevels) throw InconsistencyError("center reshape against an empty resident");
  CenterArray out;
  std::uint64_t agg = 0;
  for (std::size_t i = 0; i < kMaxLevels; ++i) {
    if (i < j)
      out[i] = delta[i];
    else
      agg += delta[i];
  }
  out[j] += agg;
  return out;
}

void Engine::ff_cleanup(Vertex v) {
  hc_.clear();
  marked_.clear();
  CleanupEntry seed;
  seed.id = TupleId{v, v, v, v};
  seed.trivial = true;
  seed.lhp = 1;
  seed.hp = 1;
  const std::size_t c = center_of(v);
  seed.lhp_ca = CenterArray::unit(c);
  seed.hp_ca = CenterArray::unit(c);
  hc_[TripleKey{Weight::zero(), v, v}].push_back(seed);

  while (!hc_.empty()) {
    auto it = hc_.begin();
    const TripleKey key = it->first;
    const std::vector<CleanupEntry> s = std::move(it->second);
    hc_.erase(it);
    live_->heap_ops++;
    live_->triples_touched += s.size();
    cleanup_extend(s, key, Side::kLeft, v);
    cleanup_extend(s, key, Side::kRight, v);
  }
}

void Engine::cleanup_extend(const std::vector<CleanupEntry>& s, const TripleKey& key, Side side,
                            Vertex v) {
  const bool left = side == Side::kLeft;
  if (s.front().trivial) {
    // Seed stage: the removals are v's own arc triples.
    const auto neigh = left ? cur_.in_neighbors(v) : cur_.out_neighbors(v);
    for (Vertex u : neigh) {
      const TupleId id = left ? arc_tuple(u, v) : arc_tuple(v, u);
      const Weight w = left ? cur_.arc_weight(u, v) : cur_.arc_weight(v, u);
      if (marked_.count(MarkKey{id, w})) continue;
      Triple* tr = find_triple(id.x, id.y, id, w);
      if (!tr) throw InconsistencyError("arc present but its triple is missing");
      apply_removal(id.x, id.y, tr, s.front().lhp, s.front().lhp_ca, s.front().hp,
                    s.front().hp_ca, TripleKey{w, id.x, id.y});
    }
    return;
  }

  struct Agg {
    std::uint64_t lhp = 0, hp = 0;
    CenterArray lhp_ca, hp_ca;
  };
  std::map<Vertex, Agg> groups;
  for (const CleanupEntry& e : s) {
    Agg& a = groups[left ? e.id.b : e.id.a];
    a.lhp += e.lhp;
    a.hp += e.hp;
    a.lhp_ca.add(e.lhp_ca);
    a.hp_ca.add(e.hp_ca);
  }

  for (const auto& [g, agg] : groups) {
    const auto& table = left ? lreg_ : rreg_;
    auto rit = table.find(tri_key(key.x, g, key.y));
    if (rit == table.end()) continue;
    std::vector<Vertex> candidates;
    candidates.reserve(rit->second.size());
    for (const auto& [cand, cnt] : rit->second)
      if (cnt > 0) candidates.push_back(cand);

    for (Vertex xp : candidates) {
      const TupleId nid =
          left ? TupleId{xp, key.x, g, key.y} : TupleId{key.x, g, key.y, xp};
      const Weight we = left ? cur_.arc_weight(xp, key.x) : cur_.arc_weight(key.y, xp);
      if (we.is_infinite())
        throw InconsistencyError("registered extension without its arc");
      const Weight wtp = key.wt + we;
      if (marked_.count(MarkKey{nid, wtp})) continue;
      const Vertex px = left ? xp : key.x;
      const Vertex py = left ? key.y : xp;
      Triple* tr = find_triple(px, py, nid, wtp);
      if (!tr) continue;  // no LHT of this form at this weight in the system
      apply_removal(px, py, tr, agg.lhp, agg.lhp_ca, agg.hp, agg.hp_ca, TripleKey{wtp, px, py});
    }
  }
}

void Engine::apply_removal(Vertex px, Vertex py, Triple* tr, std::uint64_t dl,
                           const CenterArray& cl, std::uint64_t dh, const CenterArray& ch,
                           const TripleKey& pushkey) {
  PairData& d = *pd_find(px, py);
  const TupleId id = tr->id;
  const Weight wt = tr->wt;
  const Weight min_before = pstar_min(d);
  live_->triples_touched++;

  // LHT side.
  CenterArray lshaped = cleanup_center_reshape(cl, tr->p_ca);
  if (lshaped.total() != dl) throw InconsistencyError("removal reshape lost mass");
  for (std::size_t i = 0; i < kMaxLevels; ++i)
    if (lshaped[i] > 0 && lshaped[i] == tr->p_ca[i]) pair_gauge_--;
  tr->p_ca.subtract(lshaped);
  if (dl > tr->p_count) throw InconsistencyError("triple count underflow");
  tr->p_count -= dl;

  // HT side: removed paths can only be historical if the resident is.
  std::uint64_t hp_out = 0;
  CenterArray hshaped;
  if (tr->beta && dh > 0) {
    hshaped = cleanup_center_reshape(ch, tr->s_ca);
    std::vector<std::size_t> dying;
    for (std::size_t i = 0; i < kMaxLevels; ++i)
      if (hshaped[i] > 0 && hshaped[i] == tr->s_ca[i]) dying.push_back(i);
    tr->s_ca.subtract(hshaped);
    if (dh > tr->s_count) throw InconsistencyError("historical count underflow");
    tr->s_count -= dh;
    for (std::size_t i : dying) star_leave_level(px, py, tr, i);
    hp_out = dh;
    if (tr->s_count == 0) {
      d.pstar.erase(SKey{wt, id.a, id.b});
      dm_unlink(px, py, wt);
      tr = rekey_beta(d, tr, false);
    }
  }
  if (tr->s_count > tr->p_count) throw InconsistencyError("historical count exceeds triple count");

  marked_.insert(MarkKey{id, wt});

  if (tr->p_count == 0) {
    unregister_endpoints(px, py, id, wt);
    live_->triples_removed++;
    erase_triple(px, py, tr);
    tr = nullptr;
  }

  if (pstar_min(d) > min_before) d.dirty_pass = pass_;

  CleanupEntry out;
  out.id = id;
  out.lhp = dl;
  out.lhp_ca = lshaped;
  out.hp = hp_out;
  out.hp_ca = hshaped;
  hc_[pushkey].push_back(out);
  live_->heap_ops++;
}

void Engine::debug_cleanup(Vertex v) {
  pass_ += 1;
  ff_cleanup(v);
}

// --- fixup -----------------------------------------------------------------

CenterArray Engine::fixup_center_reshape(const CenterArray& delta, std::size_t ext_center) {
  const std::size_t j = delta.oldest_level();
  if (j == kMaxLevels) throw InconsistencyError("fixup reshape on empty delta");
  if (ext_center >= j) return delta;
  CenterArray out;
  std::uint64_t agg = 0;
  for (std::size_t i = 0; i < kMaxLevels; ++i) {
    if (i < ext_center)
      out[i] = delta[i];
    else
      agg += delta[i];
  }
  out[ext_center] = agg;
  return out;
}

void Engine::ff_populate(Vertex v, std::size_t k) {
  // Trivial triples for every arc incident to v under the new weights.
  for (Vertex u = 0; u < cur_.order(); ++u) {
    if (u == v) continue;
    for (int dir = 0; dir < 2; ++dir) {
      const Vertex from = dir == 0 ? u : v;
      const Vertex to = dir == 0 ? v : u;
      const Weight w = cur_.arc_weight(from, to);
      if (w.is_infinite()) continue;
      const TupleId id = arc_tuple(from, to);
      if (find_triple(from, to, id, w)) throw InconsistencyError("arc triple survived cleanup");
      insert_fresh_triple(from, to, id, w, 1, CenterArray::unit(k));
      FixupEntry e;
      e.id = id;
      e.count = 1;
      e.ca = CenterArray::unit(k);
      e.through_v = true;
      hf_[TripleKey{w, from, to}].push_back(e);
      live_->heap_ops++;
    }
  }
  // One min-key candidate per stored pair.
  for (auto& [pk, d] : pairs_) {
    if (d.p.empty()) continue;
    const Vertex x = static_cast<Vertex>(pk >> 32);
    const Vertex y = static_cast<Vertex>(pk & 0xffffffffu);
    const auto& [key, tr] = *d.p.begin();
    FixupEntry e;
    e.id = tr.id;
    e.count = tr.p_count;
    e.ca = tr.p_ca;
    e.resident_seed = true;
    hf_[TripleKey{key.wt, x, y}].push_back(e);
    live_->heap_ops++;
  }
}

void Engine::ff_fixup(Vertex v, std::size_t k) {
  hf_.clear();
  marked_.clear();
  ff_populate(v, k);

  while (!hf_.empty()) {
    auto it = hf_.begin();
    const TripleKey key = it->first;
    std::vector<FixupEntry> sprime = std::move(it->second);
    hf_.erase(it);
    live_->heap_ops++;

    PairData& d = pd(key.x, key.y);
    if (d.extracted_pass == pass_) continue;  // only the first per-pair extraction matters
    d.extracted_pass = pass_;
    live_->triples_touched += sprime.size();

    if (first_extraction_hook_) first_extraction_hook_(key.x, key.y, key.wt);

    std::uint64_t tau = kNoEra;
    std::vector<Member> s = select_extendable(sprime, key.x, key.y, key.wt, v, k, tau);
    fixup_extend(s, key, Side::kLeft, v, tau);
    fixup_extend(s, key, Side::kRight, v, tau);
    // beta bits were set on P* insertion during selection; record the
    // distance history for this pair (level and step of the current update).
    auto [dit, fresh] = d.dm.try_emplace(key.wt);
    dit->second.level = k;
    dit->second.time = t_;
    if (fresh) dit->second.refs = 0;  // refs maintained by the P* links
  }
}

std::vector<Engine::Member> Engine::select_extendable(std::vector<FixupEntry>& sprime, Vertex x,
                                                      Vertex y, Weight wt, Vertex v, std::size_t k,
                                                      std::uint64_t& tau_min) {
  PairData& d = pd(x, y);
  std::vector<Member> s;
  std::set<Triple*> in_s;

  tau_min = d.dm.empty() ? kNoEra : d.dm.begin()->second.time;
  const bool branch_a = (d.dirty_pass == pass_) || d.pstar.empty();

  auto add_member = [&](Member m) {
    if (in_s.insert(m.tr).second) s.push_back(std::move(m));
  };

  if (branch_a) {
    std::vector<Triple*> pulled;
    for (auto it = d.p.lower_bound(PKey{wt, 0, 0, 0}); it != d.p.end() && it->first.wt == wt; ++it)
      pulled.push_back(&it->second);

    for (Triple* tr : pulled) {
      live_->triples_touched++;
      if (!tr->beta) {
        Member m;
        m.fresh = tr->p_count;
        m.fresh_ca = tr->p_ca;
        tr = rekey_beta(d, tr, true);
        tr->s_count = tr->p_count;
        tr->s_ca = tr->p_ca;
        d.pstar[SKey{wt, tr->id.a, tr->id.b}] = tr;
        dm_link(x, y, wt);
        for (std::size_t i = 0; i < r_; ++i)
          if (tr->s_ca[i] > 0) star_enter_level(x, y, tr, i);
        m.tr = tr;
        add_member(std::move(m));
      } else if (tr->s_count != tr->p_count) {
        // Historical triple that gained paths while not shortest: repair.
        if (tr->s_count > tr->p_count)
          throw InconsistencyError("historical count exceeds triple count");
        Member m;
        m.tr = tr;
        m.fresh = tr->p_count - tr->s_count;
        m.restored = tr->s_count;
        m.restored_ca = tr->s_ca;
        CenterArray fresh_ca = tr->p_ca;
        fresh_ca.subtract(tr->s_ca);
        m.fresh_ca = fresh_ca;
        for (std::size_t i = 0; i < r_; ++i)
          if (tr->s_ca[i] == 0 && tr->p_ca[i] > 0) star_enter_level(x, y, tr, i);
        tr->s_count = tr->p_count;
        tr->s_ca = tr->p_ca;
        add_member(std::move(m));
      }
    }

    // Restored historical triples that need new extensions: reachable only
    // through the historical-extension sets, in levels strictly newer than
    // the era when wt was last the shortest distance.
    if (tau_min != kNoEra) {
      auto rn_it = d.rn.find(wt);
      if (rn_it != d.rn.end()) {
        for (const auto& [bp, cnt] : rn_it->second) {
          if (cnt == 0) continue;
          bool ok = false;
          for (std::size_t h = 0; h < r_; ++h) {
            if (!level_active(h)) continue;
            if (time_of_[h] <= tau_min) break;
            live_->he_lookups++;
            auto sit = levels_[h].lstar.find(pair_key(x, bp));
            if (sit != levels_[h].lstar.end() && !sit->second.empty()) {
              ok = true;
              break;
            }
          }
          if (!ok) continue;
          for (auto pit = d.pstar.lower_bound(SKey{wt, 0, 0});
               pit != d.pstar.end() && pit->first.wt == wt; ++pit) {
            Triple* tr = pit->second;
            if (tr->id.b != bp) continue;
            Member m;
            m.tr = tr;
            m.restored = tr->s_count;
            m.restored_ca = tr->s_ca;
            add_member(std::move(m));
          }
        }
      }
      auto ln_it = d.ln.find(wt);
      if (ln_it != d.ln.end()) {
        for (const auto& [ap, cnt] : ln_it->second) {
          if (cnt == 0) continue;
          bool ok = false;
          for (std::size_t h = 0; h < r_; ++h) {
            if (!level_active(h)) continue;
            if (time_of_[h] <= tau_min) break;
            live_->he_lookups++;
            auto sit = levels_[h].rstar.find(pair_key(ap, y));
            if (sit != levels_[h].rstar.end() && !sit->second.empty()) {
              ok = true;
              break;
            }
          }
          if (!ok) continue;
          for (auto pit = d.pstar.lower_bound(SKey{wt, 0, 0});
               pit != d.pstar.end() && pit->first.wt == wt; ++pit) {
            Triple* tr = pit->second;
            if (tr->id.a != ap) continue;
            Member m;
            m.tr = tr;
            m.restored = tr->s_count;
            m.restored_ca = tr->s_ca;
            add_member(std::move(m));
          }
        }
      }
    }
  } else {
    // Distance unchanged: only the extracted candidates re-created through v
    // are inserted, into the current level's stores.
    std::map<TupleId, std::pair<std::uint64_t, CenterArray>> agg;
    for (const FixupEntry& e : sprime) {
      if (!e.through_v) continue;
      auto& a = agg[e.id];
      a.first += e.count;
      a.second.add(e.ca);
    }
    for (const auto& [id, a] : agg) {
      Triple* tr = find_triple(x, y, id, wt);
      if (!tr) throw InconsistencyError("extracted candidate lost its resident");
      live_->triples_touched++;
      if (!tr->beta) {
        tr = rekey_beta(d, tr, true);
        d.pstar[SKey{wt, id.a, id.b}] = tr;
        dm_link(x, y, wt);
      }
      const bool enters = tr->s_ca[k] == 0 && a.first > 0;
      tr->s_count += a.first;
      tr->s_ca.add(a.second);
      if (a.second.level_center() != k || a.second.oldest_level() != k)
        throw InconsistencyError("through-v mass not centered at the current level");
      if (enters) star_enter_level(x, y, tr, k);
      Member m;
      m.tr = tr;
      m.fresh = a.first;
      m.fresh_ca = a.second;
      m.through_v = true;
      add_member(std::move(m));
    }
  }
  return s;
}

void Engine::fixup_extend(std::vector<Member>& s, const TripleKey& key, Side side, Vertex v,
                          std::uint64_t tau_min) {
  if (s.empty()) return;
  const bool left = side == Side::kLeft;
  PairData& d = pd(key.x, key.y);

  struct Group {
    std::uint64_t fresh = 0, restored = 0;
    CenterArray fresh_ca, restored_ca;
    std::size_t h = kMaxLevels;  // most recent level center among members
    bool through_v = false;
  };
  std::map<Vertex, Group> groups;
  for (const Member& m : s) {
    Group& g = groups[left ? m.tr->id.b : m.tr->id.a];
    g.fresh += m.fresh;
    g.restored += m.restored;
    g.fresh_ca.add(m.fresh_ca);
    g.restored_ca.add(m.restored_ca);
    g.h = std::min(g.h, m.tr->p_ca.level_center());
    g.through_v = g.through_v || m.through_v;
  }

  // The era bound for case (a): the level/time at which the next larger
  // historical weight was last shortest. No such record means no bound.
  std::uint64_t j_time = 0;
  {
    auto it = d.dm.upper_bound(key.wt);
    if (it != d.dm.end()) j_time = it->second.time;
  }

  auto try_extend = [&](Vertex xp, const Vertex gkey, const Group& g) {
    if (left ? (xp == key.y) : (xp == key.x)) return;  // would close a cycle
    const TupleId nid =
        left ? TupleId{xp, key.x, gkey, key.y} : TupleId{key.x, gkey, key.y, xp};
    const Weight we = left ? cur_.arc_weight(xp, key.x) : cur_.arc_weight(key.y, xp);
    if (we.is_infinite()) return;  // stale level-store candidate
    const Weight wtp = key.wt + we;
    const MarkKey mk{nid, wtp};
    if (marked_.count(mk)) return;

    const bool restored_ok = g.restored > 0 && tau_min != kNoEra && last_touch_[xp] > tau_min;
    const std::uint64_t delta = g.fresh + (restored_ok ? g.restored : 0);
    if (delta == 0) return;
    CenterArray cd = g.fresh_ca;
    if (restored_ok) cd.add(g.restored_ca);
    const CenterArray shaped = fixup_center_reshape(cd, center_of(xp));

    const Vertex px = left ? xp : key.x;
    const Vertex py = left ? key.y : xp;
    Triple* tr = find_triple(px, py, nid, wtp);
    if (tr) {
      live_->triples_touched++;
      touch_gauge_add(tr->p_ca, shaped);
      tr->p_ca.add(shaped);
      tr->p_count += delta;
      tr->update_num = t_;
    } else {
      tr = insert_fresh_triple(px, py, nid, wtp, delta, shaped);
      std::size_t support = 0;
      for (std::size_t i = 0; i < kMaxLevels; ++i)
        if (shaped[i] > 0) support++;
      if (support > 1) multilevel_creations_++;
    }
    marked_.insert(mk);

    FixupEntry e;
    e.id = nid;
    e.count = delta;
    e.ca = shaped;
    e.through_v = g.through_v || xp == v;
    hf_[TripleKey{wtp, px, py}].push_back(e);
    live_->heap_ops++;
  };

  for (const auto& [gkey, g] : groups) {
    const std::uint64_t prefix_pair =
        left ? pair_key(key.x, gkey) : pair_key(gkey, key.y);
    const bool any_fresh = g.fresh > 0;
    if (any_fresh) {
      // Case (a): full extension sets on the active levels in [h, j), then
      // centered-only sets strictly below h.
      for (std::size_t i = 0; i < r_; ++i) {
        if (!level_active(i)) continue;
        if (time_of_[i] <= j_time) break;
        if (i < g.h) continue;
        const auto& tbl = left ? levels_[i].lstar : levels_[i].rstar;
        auto sit = tbl.find(prefix_pair);
        if (sit == tbl.end()) continue;
        const std::vector<Vertex> cands(sit->second.begin(), sit->second.end());
        for (Vertex xp : cands) try_extend(xp, gkey, g);
      }
      for (std::size_t i = 0; i < r_ && i < g.h; ++i) {
        if (!level_active(i)) continue;
        const auto& tbl = left ? levels_[i].lcstar : levels_[i].rcstar;
        auto sit = tbl.find(prefix_pair);
        if (sit == tbl.end()) continue;
        const std::vector<Vertex> cands(sit->second.begin(), sit->second.end());
        for (Vertex xp : cands) try_extend(xp, gkey, g);
      }
    } else {
      // Case (b): restored-only group; extensions live strictly after the
      // era in which wt was last shortest, through centered vertices only.
      for (std::size_t i = 0; i < r_; ++i) {
        if (!level_active(i)) continue;
        if (tau_min == kNoEra || time_of_[i] <= tau_min) break;
        const auto& tbl = left ? levels_[i].lcstar : levels_[i].rcstar;
        auto sit = tbl.find(prefix_pair);
        if (sit == tbl.end()) continue;
        const std::vector<Vertex> cands(sit->second.begin(), sit->second.end());
        for (Vertex xp : cands) try_extend(xp, gkey, g);
      }
    }
  }
}

// --- queries and introspection ----------------------------------------------

Weight Engine::query_distance(Vertex x, Vertex y) const {
  if (x >= cur_.order() || y >= cur_.order()) throw std::out_of_range("vertex id out of range");
  if (x == y) return Weight::zero();
  const PairData* d = pd_find(x, y);
  if (!d || d->pstar.empty()) return kInfinity;
  return d->pstar.begin()->first.wt;
}

std::uint64_t Engine::query_sigma(Vertex x, Vertex y) const {
  if (x >= cur_.order() || y >= cur_.order()) throw std::out_of_range("vertex id out of range");
  if (x == y) return 1;  // sigma_xx convention for the BC formula
  const PairData* d = pd_find(x, y);
  if (!d || d->pstar.empty()) return 0;
  const Weight min = d->pstar.begin()->first.wt;
  std::uint64_t sum = 0;
  for (auto it = d->pstar.begin(); it != d->pstar.end() && it->first.wt == min; ++it) {
    if (sum + it->second->s_count < sum) throw std::overflow_error("sigma overflow");
    sum += it->second->s_count;
  }
  return sum;
}

std::vector<std::size_t> Engine::active_levels() const {
  std::vector<std::size_t> r;
  for (std::size_t i = 0; i < r_; ++i)
    if (level_active(i)) r.push_back(i);
  return r;
}

std::set<Vertex> Engine::rstar_union(Vertex x, Vertex y) const {
  std::set<Vertex> out;
  for (std::size_t i = 0; i < r_; ++i) {
    if (!level_active(i)) continue;
    auto it = levels_[i].rstar.find(pair_key(x, y));
    if (it == levels_[i].rstar.end()) continue;
    out.insert(it->second.begin(), it->second.end());
  }
  return out;
}

std::set<Vertex> Engine::lstar_union(Vertex x, Vertex y) const {
  std::set<Vertex> out;
  for (std::size_t i = 0; i < r_; ++i) {
    if (!level_active(i)) continue;
    auto it = levels_[i].lstar.find(pair_key(x, y));
    if (it == levels_[i].lstar.end()) continue;
    out.insert(it->second.begin(), it->second.end());
  }
  return out;
}

std::vector<Engine::TripleView> Engine::triples(Vertex x, Vertex y) const {
  std::vector<TripleView> out;
  const PairData* d = pd_find(x, y);
  if (!d) return out;
  for (const auto& [key, tr] : d->p)
    out.push_back(TripleView{tr.id, tr.wt, tr.p_count, tr.p_ca, tr.beta, tr.s_count, tr.s_ca});
  return out;
}

std::vector<std::tuple<TupleId, Weight, std::uint64_t>> Engine::pstar_triples(Vertex x,
                                                                              Vertex y) const {
  std::vector<std::tuple<TupleId, Weight, std::uint64_t>> out;
  const PairData* d = pd_find(x, y);
  if (!d) return out;
  for (const auto& [key, tr] : d->pstar) out.emplace_back(tr->id, tr->wt, tr->s_count);
  return out;
}

std::vector<std::tuple<Vertex, Vertex, Vertex, Vertex>> Engine::l_registry() const {
  std::vector<std::tuple<Vertex, Vertex, Vertex, Vertex>> out;
  for (const auto& [key, members] : lreg_) {
    const Vertex x = static_cast<Vertex>((key >> 42) & 0x1fffff);
    const Vertex b = static_cast<Vertex>((key >> 21) & 0x1fffff);
    const Vertex y = static_cast<Vertex>(key & 0x1fffff);
    for (const auto& [m, c] : members)
      if (c > 0) out.emplace_back(x, b, y, m);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::tuple<Vertex, Vertex, Vertex, Vertex>> Engine::r_registry() const {
  std::vector<std::tuple<Vertex, Vertex, Vertex, Vertex>> out;
  for (const auto& [key, members] : rreg_) {
    const Vertex x = static_cast<Vertex>((key >> 42) & 0x1fffff);
    const Vertex a = static_cast<Vertex>((key >> 21) & 0x1fffff);
    const Vertex b = static_cast<Vertex>(key & 0x1fffff);
    for (const auto& [m, c] : members)
      if (c > 0) out.emplace_back(x, a, b, m);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Engine::DmView> Engine::dm_records(Vertex x, Vertex y) const {
  std::vector<DmView> out;
  const PairData* d = pd_find(x, y);
  if (!d) return out;
  for (const auto& [wt, rec] : d->dm) out.push_back(DmView{wt, rec.level, rec.time, rec.refs});
  return out;
}

std::set<Vertex> Engine::rn_set(Vertex x, Vertex y, Weight wt) const {
  std::set<Vertex> out;
  const PairData* d = pd_find(x, y);
  if (!d) return out;
  auto it = d->rn.find(wt);
  if (it == d->rn.end()) return out;
  for (const auto& [b, c] : it->second)
    if (c > 0) out.insert(b);
  return out;
}

std::set<Vertex> Engine::ln_set(Vertex x, Vertex y, Weight wt) const {
  std::set<Vertex> out;
  const PairData* d = pd_find(x, y);
  if (!d) return out;
  auto it = d->ln.find(wt);
  if (it == d->ln.end()) return out;
  for (const auto& [a, c] : it->second)
    if (c > 0) out.insert(a);
  return out;
}

std::set<Vertex> Engine::l_set(Vertex x, Vertex b, Vertex y) const {
  std::set<Vertex> out;
  auto it = lreg_.find(tri_key(x, b, y));
  if (it == lreg_.end()) return out;
  for (const auto& [m, c] : it->second)
    if (c > 0) out.insert(m);
  return out;
}

std::set<Vertex> Engine::r_set(Vertex x, Vertex a, Vertex b) const {
  std::set<Vertex> out;
  auto it = rreg_.find(tri_key(x, a, b));
  if (it == rreg_.end()) return out;
  for (const auto& [m, c] : it->second)
    if (c > 0) out.insert(m);
  return out;
}

std::vector<std::tuple<TupleId, Weight, std::uint64_t>> Engine::pstar_level(std::size_t level,
                                                                            Vertex x,
                                                                            Vertex y) const {
  std::vector<std::tuple<TupleId, Weight, std::uint64_t>> out;
  if (level >= r_) return out;
  auto it = levels_[level].pstar.find(pair_key(x, y));
  if (it == levels_[level].pstar.end()) return out;
  for (const auto& [key, tr] : it->second)
    out.emplace_back(tr->id, tr->wt, tr->s_ca[level]);
  return out;
}

std::set<Vertex> Engine::lstar_level(std::size_t level, Vertex x, Vertex y) const {
  std::set<Vertex> out;
  if (level >= r_) return out;
  auto it = levels_[level].lstar.find(pair_key(x, y));
  if (it != levels_[level].lstar.end()) out = it->second;
  return out;
}

std::set<Vertex> Engine::rstar_level(std::size_t level, Vertex x, Vertex y) const {
  std::set<Vertex> out;
  if (level >= r_) return out;
  auto it = levels_[level].rstar.find(pair_key(x, y));
  if (it != levels_[level].rstar.end()) out = it->second;
  return out;
}

std::set<Vertex> Engine::lcstar_level(std::size_t level, Vertex x, Vertex y) const {
  std::set<Vertex> out;
  if (level >= r_) return out;
  auto it = levels_[level].lcstar.find(pair_key(x, y));
  if (it != levels_[level].lcstar.end()) out = it->second;
  return out;
}

std::set<Vertex> Engine::rcstar_level(std::size_t level, Vertex x, Vertex y) const {
  std::set<Vertex> out;
  if (level >= r_) return out;
  auto it = levels_[level].rcstar.find(pair_key(x, y));
  if (it != levels_[level].rcstar.end()) out = it->second;
  return out;
}

std::vector<std::pair<Vertex, Vertex>> Engine::stored_pairs() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  for (const auto& [pk, d] : pairs_) {
    if (d.p.empty()) continue;
    out.emplace_back(static_cast<Vertex>(pk >> 32), static_cast<Vertex>(pk & 0xffffffffu));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string Engine::dump() const {
  struct Line {
    Vertex x, y;
    Weight wt;
    Vertex a, b;
    std::string text;
  };
  std::vector<Line> lines;
  for (const auto& [pk, d] : pairs_) {
    const Vertex x = static_cast<Vertex>(pk >> 32);
    const Vertex y = static_cast<Vertex>(pk & 0xffffffffu);
    for (const auto& [key, tr] : d.p) {
      std::ostringstream os;
      os << tr.id.x << ' ' << tr.id.a << ' ' << tr.id.b << ' ' << tr.id.y << ' ' << tr.wt.str()
         << ' ' << tr.p_count << ' ' << (tr.beta ? 1 : 0) << " centers=[";
      for (std::size_t i = 0; i < r_; ++i) {
        if (i) os << ',';
        os << tr.p_ca[i];
      }
      os << ']';
      lines.push_back(Line{x, y, tr.wt, tr.id.a, tr.id.b, os.str()});
    }
  }
  std::sort(lines.begin(), lines.end(), [](const Line& l, const Line& r) {
    return std::tie(l.x, l.y, l.wt, l.a, l.b) < std::tie(r.x, r.y, r.wt, r.a, r.b);
  });
  std::string out;
  for (const Line& l : lines) {
    out += l.text;
    out += '\n';
  }
  return out;
}

}  // namespace apasp
