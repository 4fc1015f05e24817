#include <algorithm>
#include <map>
#include <set>

#include "dessins/normal_search.hpp"
#include "dessins/quotient.hpp"
#include "dessins/singerman.hpp"
#include "doctest.h"

using namespace dessins;

namespace {

std::vector<RegularTable> kernels(int p, int q, int r, uint32_t n_max) {
  SearchConfig cfg;
  cfg.n_max = n_max;
  cfg.mode = SearchMode::kTorsionFreeOnly;
  return enumerate_normal_all(Signature::make(p, q, r).value(), cfg);
}

}  // namespace

TEST_SUITE_BEGIN("singerman");

TEST_CASE("rule table shape and frozen checksum") {
  auto& rules = inclusion_rules();
  CHECK(rules.size() == 14);
  for (auto& r : rules) {
    CHECK(r.index >= 2);
    CHECK(r.index <= 24);
    CHECK_FALSE(r.e0.empty());
    CHECK_FALSE(r.e1.empty());
  }
  // content checksum of the versioned dump; any edit to patterns, indices or
  // embedding words must be deliberate and revalidated
  CHECK(inclusion_rules_checksum() ==
        "407f008657e26be4eb2e9f1cc1a7b506a16e7eb81f33b717122eae3c34289a28");
}

TEST_CASE("instances_for finds the expected embeddings") {
  auto get = [](int p, int q, int r) {
    return instances_for(Signature::make(p, q, r).value());
  };
  // (7,7,7) embeds in (2,7,14), (3,3,7), (2,3,14) and (2,3,7)
  std::set<std::string> sups;
  for (auto& inst : get(7, 7, 7)) sups.insert(inst.sup_sig.str());
  CHECK(sups == std::set<std::string>{"2,7,14", "3,3,7", "2,3,14", "2,3,7"});
  // a signature matching no pattern
  CHECK(get(3, 5, 7).empty());
  for (auto& inst : get(7, 7, 7)) {
    CHECK(inst.sub_sig == Signature::make(7, 7, 7).value());
    CHECK(inst.sub_orders == std::array<int, 3>{7, 7, 7});
  }
}

TEST_CASE("every instance over the genus-5 signatures validates") {
  size_t checked = 0;
  for (auto& adm : admissible_signatures(5)) {
    for (auto& inst : instances_for(adm.sig)) {
      auto rep = validate_rule(inst);
      for (auto& issue : rep.issues) MESSAGE(inst.rule->name, " s=", inst.s, " t=", inst.t, ": ", issue);
      CHECK(rep.ok);
      ++checked;
    }
  }
  CHECK(checked >= 50);
}

TEST_CASE("validated instances also close in actual super-group quotients") {
  // supply the (2,3,7) index-168 quotient when validating (7,7,7) < (2,3,7)
  auto hur = kernels(2, 3, 7, 168);
  REQUIRE(hur.size() == 1);
  for (auto& inst : instances_for(Signature::make(7, 7, 7).value())) {
    if (inst.sup_sig.str() != "2,3,7") continue;
    auto rep = validate_rule(inst, {hur[0].table});
    CHECK(rep.ok);
  }
}

TEST_CASE("pair transforms realize all order rearrangements") {
  auto ks = kernels(2, 3, 8, 48);
  REQUIRE(ks.size() == 1);
  auto& t = ks[0].table;
  std::set<std::array<uint32_t, 3>> orders;
  for (int k = 0; k < kNumPairTransforms; ++k) {
    auto tk = transform_pair(t, k);
    CHECK(tk.is_standard());
    CHECK(tk.size() == t.size());
    auto o = transform_orders(t, k);
    CHECK(o == table_generator_orders(tk));
    orders.insert(o);
  }
  CHECK(orders.size() == 6);  // distinct exponents: all 6 permutations occur
  CHECK(transform_pair(t, 0) == t);
  CHECK(transform_orders(t, 0) == std::array<uint32_t, 3>{2, 3, 8});
}

TEST_CASE("sigma_variants keeps the sorted order triple") {
  auto k238 = kernels(2, 3, 8, 48);
  REQUIRE(k238.size() == 1);
  CHECK(sigma_variants(k238[0].table).size() == 1);  // distinct orders: identity only

  auto k777 = kernels(7, 7, 7, 7);
  REQUIRE(k777.size() == 5);
  for (auto& k : k777) {
    auto vars = sigma_variants(k.table);
    CHECK(vars.size() >= 1);
    CHECK(vars.size() <= 6);
    bool has_self = false;
    for (auto& v : vars) {
      CHECK(table_generator_orders(v) == std::array<uint32_t, 3>{7, 7, 7});
      if (v == k.table) has_self = true;
    }
    CHECK(has_self);
  }
}

TEST_CASE("try_extend and maximal_closure on the genus-3 kernels of (7,7,7)") {
  auto sig = Signature::make(7, 7, 7).value();
  auto ks = kernels(7, 7, 7, 7);
  REQUIRE(ks.size() == 5);
  std::map<std::string, int> closures;
  std::set<std::string> sup_keys;
  for (auto& k : ks) {
    auto mc = maximal_closure(sig, k.table);
    CHECK(mc.sup_index == mc.table.size());
    closures[mc.sup_sig.str()]++;
    sup_keys.insert(digest_hex(canonical_key(mc.sup_sig, mc.table)));
  }
  // 2 kernels extend into Delta(2,3,7), both landing on the unique index-168
  // kernel (the genus-3 surface with 168 automorphisms); the other 3 stop
  // in Delta(2,7,14)
  CHECK(closures == std::map<std::string, int>{{"2,3,7", 2}, {"2,7,14", 3}});
  // both (2,3,7)-closures land on the unique index-168 kernel
  auto hur = kernels(2, 3, 7, 168);
  REQUIRE(hur.size() == 1);
  CHECK(sup_keys.count(
      digest_hex(canonical_key(Signature::make(2, 3, 7).value(), hur[0].table))));
  CHECK(sup_keys.size() == 2);  // one (2,3,7) table + one (2,7,14) table
}

TEST_CASE("maximal_closure of an already-maximal record is itself") {
  auto sig = Signature::make(2, 3, 7).value();
  auto hur = kernels(2, 3, 7, 168);
  REQUIRE(hur.size() == 1);
  auto mc = maximal_closure(sig, hur[0].table);
  CHECK(mc.sup_sig == sig);
  CHECK(mc.sup_index == 168);
  CHECK(mc.table == hur[0].table);
}

TEST_SUITE_END();
