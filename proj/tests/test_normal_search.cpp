#include <algorithm>
#include <set>
#include <string>

#include "dessins/normal_search.hpp"
#include "dessins/quotient.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace dessins;

namespace {

struct Tally {
  uint64_t total = 0, tf = 0;
  std::multiset<std::string> keys;
};

Tally run(int p, int q, int r, uint32_t n_max, SearchMode mode, bool uniform = true,
          bool lc = true, uint32_t exact_n = 0) {
  auto sig = Signature::make(p, q, r).value();
  SearchConfig cfg;
  cfg.n_max = n_max;
  cfg.mode = mode;
  cfg.prune_uniform_cycle = uniform;
  cfg.prune_left_coherence = lc;
  Tally out;
  enumerate_normal(sig, cfg, [&](const RegularTable& t) {
    if (exact_n && t.table.size() != exact_n) return true;
    ++out.total;
    if (t.torsion_free) ++out.tf;
    out.keys.insert(digest_hex(canonical_key(sig, t.table)));
    return true;
  });
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("normal_search");

TEST_CASE("abelian oracle (7,7,7) at index <= 7") {
  auto oracle = oracles::count_subgroups_zm2(7, 7);
  CHECK(oracle.total == 9);  // whole group + the 8 lines of F7^2
  CHECK(oracle.torsion_free == 5);
  auto got = run(7, 7, 7, 7, SearchMode::kAll);
  CHECK(got.total == oracle.total);
  CHECK(got.tf == oracle.torsion_free);
  auto tf_only = run(7, 7, 7, 7, SearchMode::kTorsionFreeOnly);
  CHECK(tf_only.total == oracle.torsion_free);
}

TEST_CASE("abelian oracle (4,4,4) at index <= 4") {
  auto oracle = oracles::count_subgroups_zm2(4, 4);
  CHECK(oracle.total == 11);
  CHECK(oracle.torsion_free == 0);
  auto got = run(4, 4, 4, 4, SearchMode::kAll);
  CHECK(got.total == oracle.total);
  CHECK(got.tf == oracle.torsion_free);
}

TEST_CASE("torsion-free kernel counts at exact index, hand-checked quotients") {
  struct Case {
    int p, q, r;
    uint32_t n;
    uint64_t tf;
  };
  // Cyclic-quotient cases count solutions of a+b == p,q,r pattern in Z_n up
  // to nothing (each kernel is one table); verified against the abelianization.
  const Case cases[] = {
      {5, 5, 5, 5, 3},     // genus 2: a+b+c=0 in Z5, all nonzero, a=1 normalized... 3 kernels
      {7, 7, 7, 7, 5},     // genus 3
      {9, 9, 9, 9, 3},     // Z9 quotients only (Z3^2 has no order-9 image)
      {11, 11, 11, 11, 9}, // genus 5
      {3, 9, 9, 9, 2},
      {2, 5, 10, 10, 1},
      {2, 8, 8, 8, 1},
      {4, 8, 8, 8, 2},
      {3, 3, 4, 24, 1},  // SL(2,3)
  };
  for (auto& c : cases) {
    auto got = run(c.p, c.q, c.r, c.n, SearchMode::kTorsionFreeOnly, true, true, c.n);
    CHECK_MESSAGE(got.total == c.tf, c.p << "," << c.q << "," << c.r << " @ " << c.n);
  }
}

TEST_CASE("index-1 table is flagged in all mode") {
  auto sig = Signature::make(7, 7, 7).value();
  SearchConfig cfg;
  cfg.n_max = 7;
  cfg.mode = SearchMode::kAll;
  bool saw_whole = false;
  enumerate_normal(sig, cfg, [&](const RegularTable& t) {
    if (t.table.size() == 1) {
      saw_whole = true;
      CHECK(t.whole_group);
      CHECK_FALSE(t.torsion_free);
    } else {
      CHECK_FALSE(t.whole_group);
    }
    return true;
  });
  CHECK(saw_whole);
}

TEST_CASE("emitted tables are regular, standard and close the relators") {
  auto sig = Signature::make(4, 4, 4).value();
  SearchConfig cfg;
  cfg.n_max = 8;
  cfg.mode = SearchMode::kAll;
  enumerate_normal(sig, cfg, [&](const RegularTable& t) {
    CHECK(t.table.is_standard());
    CHECK(t.table.relators_close({sig.p, sig.q, sig.r}));
    CHECK(permutation_group_order(t.table, t.table.size()) == t.table.size());
    auto orders = table_generator_orders(t.table);
    CHECK(orders == t.orders);
    CHECK(t.torsion_free == is_torsion_free(sig, orders));
    return true;
  });
}

TEST_CASE("prune toggles do not change the emitted sets") {
  struct Case {
    int p, q, r;
    uint32_t n;
  };
  const Case cases[] = {{7, 7, 7, 7}, {4, 4, 4, 4}, {2, 8, 8, 16}, {2, 6, 6, 24}};
  for (auto& c : cases) {
    for (auto mode : {SearchMode::kAll, SearchMode::kTorsionFreeOnly}) {
      auto base = run(c.p, c.q, c.r, c.n, mode, true, true);
      for (bool uniform : {false, true})
        for (bool lc : {false, true}) {
          auto got = run(c.p, c.q, c.r, c.n, mode, uniform, lc);
          CHECK(got.keys == base.keys);
        }
    }
  }
}

TEST_CASE("deterministic emission order") {
  auto sig = Signature::make(4, 4, 4).value();
  SearchConfig cfg;
  cfg.n_max = 8;
  cfg.mode = SearchMode::kAll;
  std::vector<std::string> first, second;
  for (auto* v : {&first, &second})
    enumerate_normal(sig, cfg, [&](const RegularTable& t) {
      v->push_back(digest_hex(canonical_key(sig, t.table)));
      return true;
    });
  CHECK(first == second);
  CHECK_FALSE(first.empty());
}

TEST_CASE("callback can stop early") {
  auto sig = Signature::make(4, 4, 4).value();
  SearchConfig cfg;
  cfg.n_max = 8;
  cfg.mode = SearchMode::kAll;
  uint64_t seen = 0;
  enumerate_normal(sig, cfg, [&](const RegularTable&) { return ++seen < 3; });
  CHECK(seen == 3);
}

TEST_CASE("checkpoint round trip and resume completes the run") {
  auto sig = Signature::make(4, 4, 4).value();
  SearchConfig cfg;
  cfg.n_max = 8;
  cfg.mode = SearchMode::kAll;
  std::multiset<std::string> full;
  enumerate_normal(sig, cfg, [&](const RegularTable& t) {
    full.insert(digest_hex(canonical_key(sig, t.table)));
    return true;
  });
  REQUIRE_FALSE(full.empty());

  // Interrupt with a small node budget, then resume until done, possibly
  // through several checkpoints.
  std::multiset<std::string> pieced;
  SearchConfig budgeted = cfg;
  budgeted.node_budget = 20;
  std::optional<SearchCheckpoint> cp;
  int rounds = 0;
  for (;;) {
    REQUIRE(++rounds < 1000);
    try {
      enumerate_normal(sig, budgeted,
                       [&](const RegularTable& t) {
                         pieced.insert(digest_hex(canonical_key(sig, t.table)));
                         return true;
                       },
                       nullptr, cp ? &*cp : nullptr);
      break;
    } catch (const SearchBudgetExceeded& e) {
      auto bytes = e.checkpoint.serialize();
      auto back = SearchCheckpoint::deserialize(bytes);
      REQUIRE(back.has_value());
      CHECK(back->path == e.checkpoint.path);
      CHECK(back->sig == e.checkpoint.sig);
      cp = *back;
    }
  }
  CHECK(rounds > 1);  // the budget actually tripped
  CHECK(pieced == full);
}

TEST_CASE("corrupt checkpoint bytes are rejected") {
  CHECK_FALSE(SearchCheckpoint::deserialize({0, 1, 2, 3}).has_value());
  CHECK_FALSE(SearchCheckpoint::deserialize({}).has_value());
}

TEST_SUITE_END();
