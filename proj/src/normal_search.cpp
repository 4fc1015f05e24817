#include "dessins/normal_search.hpp"

#include <cassert>
#include <chrono>
#include <cstring>

#include "dessins/quotient.hpp"

namespace dessins {

namespace {

constexpr uint32_t kCheckpointMagic = 0x4b434e44;  // "DNCK"

// One DFS level: a branch slot and the candidate applied at it.
struct Frame {
  uint32_t slot = 0;
  uint32_t choice = 0;  // last candidate tried (0 = none yet)
  uint32_t ncos_before = 0;
  size_t trail_mark = 0;
};

class Searcher {
 public:
  Searcher(const Signature& sig, const SearchConfig& cfg,
           const std::function<bool(const RegularTable&)>& emit, SearchStats& stats)
      : sig_(sig), cfg_(cfg), emit_(emit), stats_(stats), n_max_(cfg.n_max) {
    exps_[0] = sig.p;
    exps_[1] = sig.q;
    exps_[2] = sig.r;
    exact_ = cfg.mode == SearchMode::kTorsionFreeOnly && cfg.prune_uniform_cycle;
    size_t cap = n_max_ + 2;
    for (auto& c : tab_) c.assign(cap, 0);
    for (int w = 0; w < 3; ++w) {
      pw_[w].resize(cap);
      ch_[w].resize(cap);
      ct_[w].resize(cap);
      cl_[w].assign(cap, 0);
      csz_[w].assign(cap, 1);
      for (uint32_t i = 0; i < cap; ++i) pw_[w][i] = ch_[w][i] = ct_[w][i] = i;
      closed_len_[w] = 0;
    }
    if (cfg_.prune_left_coherence) {
      lam_.assign(cap, std::vector<uint32_t>(cap, 0));
      lami_.assign(cap, std::vector<uint32_t>(cap, 0));
      lam_[1][1] = lami_[1][1] = 1;  // coset 1 is the identity; never unwound
    }
    ncos_ = 1;
    start_ = std::chrono::steady_clock::now();
  }

  void replay(const SearchCheckpoint& chk) {
    for (size_t k = 0; k < chk.path.size(); ++k) {
      uint32_t s = next_slot(stack_.empty() ? 0 : stack_.back().slot);
      if (s != chk.path[k].first || s >= 4 * ncos_)
        throw std::runtime_error("checkpoint does not match search state");
      Frame f;
      f.slot = s;
      f.choice = chk.path[k].second;
      f.ncos_before = ncos_;
      f.trail_mark = trail_.size();
      stack_.push_back(f);
      if (k + 1 == chk.path.size()) break;  // cursor frame: not applied
      if (f.choice == 0 || !apply_choice(stack_.back()))
        throw std::runtime_error("checkpoint replay failed");
    }
  }

  void run() {
    for (;;) {
      if (stopped_) return;
      uint32_t base = stack_.empty() ? 0 : stack_.back().slot;
      uint32_t s = next_slot(base);
      if (s == 4 * ncos_) {
        solution();
        if (stopped_) return;
        if (!backtrack()) return;
        continue;
      }
      Frame f;
      f.slot = s;
      f.ncos_before = ncos_;
      f.trail_mark = trail_.size();
      stack_.push_back(f);
      if (!advance(stack_.back())) {
        stack_.pop_back();
        if (!backtrack()) return;
      }
    }
  }

  void resume_pending_cursor() {
    // After replay, the top frame is a cursor whose choice has not been
    // applied; advance() in run() continues from it.
    if (stack_.empty()) return;
    Frame f = stack_.back();
    stack_.pop_back();
    // Re-enter through the normal loop by pushing and advancing.
    stack_.push_back(f);
    if (!advance(stack_.back())) {
      stack_.pop_back();
      if (!backtrack()) stopped_ = true;
    }
  }

  SearchCheckpoint checkpoint() const {
    SearchCheckpoint c;
    c.sig = sig_;
    c.config = cfg_;
    for (const Frame& f : stack_) c.path.push_back({f.slot, f.choice});
    return c;
  }

 private:
  // ---- trail ----
  void write(uint32_t* p, uint32_t v) {
    trail_.push_back({p, *p});
    *p = v;
  }
  void unwind(size_t mark) {
    while (trail_.size() > mark) {
      auto [p, v] = trail_.back();
      trail_.pop_back();
      *p = v;
    }
  }

  // ---- cycle tracking (union-find over partial relator-word paths) ----
  uint32_t find(int w, uint32_t x) const {
    while (pw_[w][x] != x) x = pw_[w][x];
    return x;
  }

  bool cycle_fail() {
    ++stats_.prune_cycle;
    return false;
  }

  bool add_edge(int w, uint32_t u, uint32_t v) {
    uint32_t e = exps_[w];
    uint32_t ru = find(w, u), rv = find(w, v);
    if (ru == rv) {
      uint32_t len = cl_[w][ru] + 1;  // cycle closes
      if (exact_) {
        if (len != e) return cycle_fail();
      } else {
        if (e % len != 0) return cycle_fail();
        if (cfg_.prune_uniform_cycle) {
          if (closed_len_[w] == 0) write(&closed_len_[w], len);
          else if (closed_len_[w] != len) return cycle_fail();
        }
      }
      return true;
    }
    uint32_t len = cl_[w][ru] + cl_[w][rv] + 1;
    uint32_t bound = e;
    if (!exact_ && cfg_.prune_uniform_cycle && closed_len_[w] != 0) bound = closed_len_[w];
    if (len >= bound) return cycle_fail();  // open path cannot fit any allowed cycle
    uint32_t head = ch_[w][ru], tail = ct_[w][rv];
    uint32_t root = csz_[w][ru] >= csz_[w][rv] ? ru : rv;
    uint32_t other = root == ru ? rv : ru;
    write(&pw_[w][other], root);
    write(&csz_[w][root], csz_[w][ru] + csz_[w][rv]);
    write(&ch_[w][root], head);
    write(&ct_[w][root], tail);
    write(&cl_[w][root], len);
    if (len == bound - 1) {
      // Forced closure tail -> head.
      if (w < 2) pending_slots_.push_back({(uint32_t)w, tail, head});
      else {
        uint32_t m = tab_[0][tail];
        if (m != 0) pending_slots_.push_back({1, m, head});
        else {
          uint32_t mm = tab_[3][head];
          if (mm != 0) pending_slots_.push_back({0, tail, mm});
          // Otherwise deferred: any later inconsistent edge fails the
          // length checks above.
        }
      }
    }
    return true;
  }

  // ---- left coherence ----
  // lam_[t] is the partial left-translation map i -> t*i of the quotient; a
  // complete table is a Cayley table iff every lam_[t] extends to a bijection,
  // so any contradiction here prunes the subtree.
  void queue_lam(uint32_t t, uint32_t i, uint32_t u) { pending_lam_.push_back({t, i, u}); }

  bool apply_lam(uint32_t t, uint32_t i, uint32_t u) {
    uint32_t cur = lam_[t][i];
    if (cur != 0) return cur == u;
    if (lami_[t][u] != 0) return false;  // injectivity
    write(&lam_[t][i], u);
    write(&lami_[t][u], i);
    for (int l = 0; l < 4; ++l) {
      uint32_t j = tab_[l][i];
      if (j == 0) continue;
      uint32_t v = tab_[l][u];
      if (v != 0) queue_lam(t, j, v);
    }
    return true;
  }

  void slot_lam_hooks(uint32_t g, uint32_t i, uint32_t j) {
    for (uint32_t t = 1; t <= ncos_; ++t) {
      uint32_t u = lam_[t][i];
      if (u != 0 && tab_[g][u] != 0) queue_lam(t, j, tab_[g][u]);
      uint32_t w = lami_[t][i];
      if (w != 0 && tab_[g][w] != 0) queue_lam(t, tab_[g][w], j);
      uint32_t u2 = lam_[t][j];
      if (u2 != 0 && tab_[g + 2][u2] != 0) queue_lam(t, i, tab_[g + 2][u2]);
      uint32_t w2 = lami_[t][j];
      if (w2 != 0 && tab_[g + 2][w2] != 0) queue_lam(t, tab_[g + 2][w2], i);
    }
  }

  // ---- deduction closure ----
  bool apply_slot(uint32_t g, uint32_t i, uint32_t j) {
    uint32_t cur = tab_[g][i];
    if (cur != 0) {
      if (cur == j) return true;
      ++stats_.prune_table_conflict;
      return false;
    }
    if (tab_[g + 2][j] != 0) {  // injectivity
      ++stats_.prune_table_conflict;
      return false;
    }
    write(&tab_[g][i], j);
    write(&tab_[g + 2][j], i);
    ++stats_.deductions;
    if (!add_edge(g, i, j)) return false;
    if (g == 0) {
      uint32_t k = tab_[1][j];
      if (k != 0 && !add_edge(2, i, k)) return false;
    } else {
      uint32_t h = tab_[2][i];
      if (h != 0 && !add_edge(2, h, j)) return false;
    }
    if (cfg_.prune_left_coherence) slot_lam_hooks(g, i, j);
    return true;
  }

  bool process() {
    while (!pending_slots_.empty() || !pending_lam_.empty()) {
      if (!pending_slots_.empty()) {
        auto [g, i, j] = pending_slots_.back();
        pending_slots_.pop_back();
        if (!apply_slot(g, i, j)) return false;
      } else {
        auto [t, i, u] = pending_lam_.back();
        pending_lam_.pop_back();
        if (!apply_lam(t, i, u)) {
          ++stats_.prune_left_coherence;
          return false;
        }
      }
    }
    return true;
  }

  // ---- branching ----
  uint32_t next_slot(uint32_t from) const {
    uint32_t s = from;
    while (s < 4 * ncos_ && tab_[s % 4][s / 4 + 1] != 0) ++s;
    return s;
  }

  uint32_t next_candidate(const Frame& f) const {
    int l = f.slot % 4;
    uint32_t i = f.slot / 4 + 1;
    int g = l & 1;
    bool fwd = l < 2;
    for (uint32_t j = f.choice + 1; j <= f.ncos_before; ++j) {
      if (fwd ? tab_[g + 2][j] == 0 : tab_[g][j] == 0) {
        (void)i;
        return j;
      }
    }
    if (f.ncos_before < n_max_ && f.choice <= f.ncos_before) return f.ncos_before + 1;
    return 0;
  }

  bool apply_choice(Frame& f) {
    int l = f.slot % 4;
    uint32_t i = f.slot / 4 + 1;
    int g = l & 1;
    uint32_t j = f.choice;
    ncos_ = f.ncos_before;
    if (j == f.ncos_before + 1) ncos_ = j;
    pending_slots_.clear();
    pending_lam_.clear();
    if (cfg_.prune_left_coherence && j == f.ncos_before + 1) {
      queue_lam(j, 1, j);
      queue_lam(1, j, j);
    }
    if (l < 2) pending_slots_.push_back({(uint32_t)g, i, j});
    else pending_slots_.push_back({(uint32_t)g, j, i});
    return process();
  }

  void check_budgets() {
    bool over = false;
    if (cfg_.node_budget != 0 && stats_.nodes >= cfg_.node_budget) over = true;
    if (!over && cfg_.seconds_budget > 0 && (stats_.nodes & 0xfff) == 0) {
      double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
      if (el > cfg_.seconds_budget) over = true;
    }
    if (over) throw SearchBudgetExceeded(checkpoint(), stats_);
  }

  // Try candidates at frame f until one survives deduction closure.
  bool advance(Frame& f) {
    for (;;) {
      unwind(f.trail_mark);
      ncos_ = f.ncos_before;
      uint32_t j = next_candidate(f);
      if (j == 0) {
        return false;
      }
      check_budgets();
      f.choice = j;
      ++stats_.nodes;
      if (stack_.size() > stats_.max_depth) stats_.max_depth = (uint32_t)stack_.size();
      if (apply_choice(f)) return true;
    }
  }

  bool backtrack() {
    while (!stack_.empty()) {
      if (advance(stack_.back())) return true;
      unwind(stack_.back().trail_mark);
      ncos_ = stack_.back().ncos_before;
      stack_.pop_back();
    }
    return false;
  }

  // Fresh left-translation coherence check on a complete table; any complete
  // table passing it is the Cayley table of its quotient.
  bool lambda_check_complete() const {
    for (int t = 0; t < 2; ++t) {
      std::vector<uint32_t> lam(ncos_ + 1, 0), inv(ncos_ + 1, 0);
      lam[1] = tab_[t][1];
      inv[lam[1]] = 1;
      std::vector<uint32_t> order_stack{1};
      std::vector<bool> done(ncos_ + 1, false);
      done[1] = true;
      while (!order_stack.empty()) {
        uint32_t i = order_stack.back();
        order_stack.pop_back();
        for (int l = 0; l < 4; ++l) {
          uint32_t j = tab_[l][i];
          uint32_t v = tab_[l][lam[i]];
          if (lam[j] == 0) {
            if (inv[v] != 0) return false;
            lam[j] = v;
            inv[v] = j;
          } else if (lam[j] != v) {
            return false;
          }
          if (!done[j]) {
            done[j] = true;
            order_stack.push_back(j);
          }
        }
      }
      for (uint32_t i = 1; i <= ncos_; ++i)
        if (lam[i] == 0) return false;
    }
    return true;
  }

  void solution() {
    ++stats_.solutions;
    CosetTable t(ncos_);
    for (uint32_t i = 1; i <= ncos_; ++i)
      for (int g = 0; g < 2; ++g) t.set(g, i, tab_[g][i]);
    if (!lambda_check_complete()) {
      ++stats_.discarded_nonregular;
      return;
    }
    // Independent regularity verification: the permutation group generated by
    // the two columns must have order exactly n.
    if (permutation_group_order(t, ncos_ + 1) != ncos_) {
      ++stats_.discarded_nonregular;
      return;
    }
    RegularTable rt;
    rt.sig = sig_;
    rt.table = std::move(t);
    rt.orders = table_generator_orders(rt.table);
    rt.torsion_free = rt.orders[0] == (uint32_t)sig_.p && rt.orders[1] == (uint32_t)sig_.q &&
                      rt.orders[2] == (uint32_t)sig_.r;
    rt.whole_group = ncos_ == 1;
    if (cfg_.mode == SearchMode::kTorsionFreeOnly && !rt.torsion_free) return;
    if (!emit_(rt)) stopped_ = true;
  }

  const Signature sig_;
  const SearchConfig cfg_;
  const std::function<bool(const RegularTable&)>& emit_;
  SearchStats& stats_;
  uint32_t n_max_;
  bool exact_ = false;
  bool stopped_ = false;
  uint32_t exps_[3];
  std::array<std::vector<uint32_t>, 4> tab_;
  std::array<std::vector<uint32_t>, 3> pw_, ch_, ct_, cl_, csz_;
  uint32_t closed_len_[3];
  std::vector<std::vector<uint32_t>> lam_, lami_;
  std::vector<std::pair<uint32_t*, uint32_t>> trail_;
  std::vector<std::array<uint32_t, 3>> pending_slots_;
  std::vector<std::array<uint32_t, 3>> pending_lam_;
  std::vector<Frame> stack_;
  uint32_t ncos_ = 1;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

void enumerate_normal(const Signature& sig, const SearchConfig& config,
                      const std::function<bool(const RegularTable&)>& emit, SearchStats* stats,
                      const SearchCheckpoint* resume) {
  SearchStats local;
  SearchStats& st = stats ? *stats : local;
  st = SearchStats{};
  Searcher s(sig, config, emit, st);
  if (resume != nullptr) {
    if (resume->sig != sig) throw std::runtime_error("checkpoint signature mismatch");
    s.replay(*resume);
    s.resume_pending_cursor();
  }
  s.run();
}

std::vector<RegularTable> enumerate_normal_all(const Signature& sig, const SearchConfig& config,
                                               SearchStats* stats) {
  std::vector<RegularTable> out;
  enumerate_normal(
      sig, config,
      [&out](const RegularTable& t) {
        out.push_back(t);
        return true;
      },
      stats);
  return out;
}

// ---- checkpoint serialization ----

static void put32(std::vector<uint8_t>& b, uint32_t v) {
  b.push_back(v & 0xff);
  b.push_back((v >> 8) & 0xff);
  b.push_back((v >> 16) & 0xff);
  b.push_back((v >> 24) & 0xff);
}

static uint32_t get32(const std::vector<uint8_t>& b, size_t off) {
  return (uint32_t)b[off] | ((uint32_t)b[off + 1] << 8) | ((uint32_t)b[off + 2] << 16) |
         ((uint32_t)b[off + 3] << 24);
}

std::vector<uint8_t> SearchCheckpoint::serialize() const {
  std::vector<uint8_t> b;
  put32(b, kCheckpointMagic);
  put32(b, 1);  // version
  put32(b, sig.p);
  put32(b, sig.q);
  put32(b, sig.r);
  put32(b, config.n_max);
  put32(b, config.mode == SearchMode::kTorsionFreeOnly ? 1 : 0);
  put32(b, (config.prune_uniform_cycle ? 1 : 0) | (config.prune_left_coherence ? 2 : 0));
  put32(b, (uint32_t)path.size());
  for (auto& [slot, choice] : path) {
    put32(b, slot);
    put32(b, choice);
  }
  return b;
}

std::optional<SearchCheckpoint> SearchCheckpoint::deserialize(const std::vector<uint8_t>& b) {
  if (b.size() < 36 || get32(b, 0) != kCheckpointMagic || get32(b, 4) != 1) return std::nullopt;
  auto sig = Signature::make(get32(b, 8), get32(b, 12), get32(b, 16));
  if (!sig) return std::nullopt;
  SearchCheckpoint c;
  c.sig = *sig;
  c.config.n_max = get32(b, 20);
  c.config.mode = get32(b, 24) ? SearchMode::kTorsionFreeOnly : SearchMode::kAll;
  uint32_t flags = get32(b, 28);
  c.config.prune_uniform_cycle = flags & 1;
  c.config.prune_left_coherence = flags & 2;
  uint32_t depth = get32(b, 32);
  if (b.size() != 36 + 8ull * depth) return std::nullopt;
  for (uint32_t k = 0; k < depth; ++k)
    c.path.push_back({get32(b, 36 + 8 * k), get32(b, 40 + 8 * k)});
  return c;
}

}  // namespace dessins
