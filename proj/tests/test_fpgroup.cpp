#include "dessins/coset_table.hpp"
#include "dessins/todd_coxeter.hpp"
#include "dessins/word.hpp"
#include "doctest.h"

using namespace dessins;

TEST_SUITE_BEGIN("fpgroup");

TEST_CASE("letter helpers") {
  CHECK(inverse_letter(kG0) == kG0inv);
  CHECK(inverse_letter(kG0inv) == kG0);
  CHECK(inverse_letter(kG1) == kG1inv);
  CHECK(letter_gen(kG0) == 0);
  CHECK(letter_gen(kG1inv) == 1);
}

TEST_CASE("word algebra") {
  Word x = Word::generator(0);
  Word y = Word::generator(1);
  CHECK(Word().empty());
  CHECK((x * x.inverse()).empty());
  CHECK((x * y * y.inverse() * x.inverse()).empty());
  CHECK((x * y).inverse() == y.inverse() * x.inverse());
  CHECK(x.pow(3).length() == 3);
  CHECK(x.pow(-2) == x.inverse() * x.inverse());
  CHECK(x.pow(0).empty());
  CHECK((x * x * y).syllables().size() == 2);
  CHECK((x * y).str() == "x y");
  CHECK(Word::generator(1, -2).str() == "y^-2");

  // push merges and cancels across syllable boundaries
  Word w;
  w.push(0, 2);
  w.push(0, -2);
  CHECK(w.empty());
  w.push(1, 1);
  w.push(0, 3);
  w.push(0, -1);
  CHECK(w == y * x * x);
}

TEST_CASE("letters round trip") {
  std::vector<int> ls = {kG0, kG0, kG1inv, kG0, kG1};
  Word w = Word::from_letters(ls);
  CHECK(w.letters() == ls);
  CHECK(w.length() == 5);
  // free reduction collapses inverse-adjacent letters
  CHECK(Word::from_letters({kG0, kG0inv}).empty());
}

TEST_CASE("coset table set keeps inverse columns consistent") {
  CosetTable t(3);
  CHECK_FALSE(t.complete());
  t.set(0, 1, 2);
  CHECK(t.get(kG0, 1) == 2);
  CHECK(t.get(kG0inv, 2) == 1);
  t.set(0, 3, 3);
  t.set(1, 1, 1);
  t.set(1, 2, 3);
  t.set(1, 3, 2);
  CHECK_FALSE(t.complete());
  t.set(0, 2, 1);
  CHECK(t.complete());
}

// The regular action of S3 = <x,y | x^2, y^3, (xy)^2> would need 6 cosets;
// instead build the 3-coset action on {1,2,3}: x = (1 2), y = (1 2 3).
static CosetTable s3_points() {
  CosetTable t(3);
  t.set(0, 1, 2);
  t.set(0, 2, 1);
  t.set(0, 3, 3);
  t.set(1, 1, 2);
  t.set(1, 2, 3);
  t.set(1, 3, 1);
  return t;
}

TEST_CASE("trace") {
  auto t = s3_points();
  Word x = Word::generator(0), y = Word::generator(1);
  CHECK(t.trace_complete(1, x * y) == 3);       // 1 -x-> 2 -y-> 3
  CHECK(t.trace_complete(1, y.pow(3)) == 1);
  CHECK(t.trace_complete(2, x.inverse()) == 1);
  CHECK(t.relators_close({2, 3, 2}));
  CHECK_FALSE(t.relators_close({2, 3, 3}));

  CosetTable partial(2);
  partial.set(0, 1, 2);
  CHECK(partial.trace(1, x).value() == 2);
  CHECK_FALSE(partial.trace(1, y).has_value());
}

TEST_CASE("standardized renumbering is canonical and idempotent") {
  auto t = s3_points();
  auto s = t.standardized();
  CHECK(s.is_standard());
  CHECK(s.standardized() == s);
  // renumber the cosets by the permutation 1->1, 2->3, 3->2 and check that
  // standardization erases the relabeling
  CosetTable u(3);
  u.set(0, 1, 3);
  u.set(0, 3, 1);
  u.set(0, 2, 2);
  u.set(1, 1, 3);
  u.set(1, 3, 2);
  u.set(1, 2, 1);
  CHECK(u.standardized() == s);
}

TEST_CASE("serialize round trip") {
  auto t = s3_points().standardized();
  auto bytes = t.serialize();
  auto back = CosetTable::deserialize(bytes);
  REQUIRE(back.has_value());
  CHECK(*back == t);
  CHECK_FALSE(CosetTable::deserialize({1, 2, 3}).has_value());
}

TEST_CASE("schreier generators and transversal") {
  auto t = s3_points().standardized();
  auto reps = t.transversal();
  REQUIRE(reps.size() == t.size() + 1);  // 1-based
  for (uint32_t i = 1; i <= t.size(); ++i) CHECK(t.trace_complete(1, reps[i]) == i);
  auto gens = t.schreier_generators();
  CHECK(gens.size() == t.size() + 1);  // n non-tree edges over 2 generators
  for (auto& w : gens) CHECK(t.trace_complete(1, w) == 1);
}

TEST_CASE("coset enumeration of the trivial subgroup gives the group order") {
  struct Case {
    Presentation pres;
    uint32_t order;
  };
  // spherical triangle groups with known orders
  const Case cases[] = {
      {{2, 2, 2}, 4},   // Z2 x Z2
      {{2, 3, 3}, 12},  // A4
      {{2, 3, 4}, 24},  // S4
      {{2, 3, 5}, 60},  // A5
      {{2, 2, 5}, 10},  // D5
  };
  for (auto& c : cases) {
    auto t = todd_coxeter(c.pres, {}, 4096);
    CHECK(t.size() == c.order);
    CHECK(t.complete());
    CHECK(t.is_standard());
    CHECK(t.relators_close(c.pres));
  }
}

TEST_CASE("coset enumeration of a cyclic subgroup") {
  // <x> in A4 = <x,y | x^2, y^3, (xy)^3> has index 6
  auto t = todd_coxeter({2, 3, 3}, {Word::generator(0)}, 4096);
  CHECK(t.size() == 6);
  CHECK(t.trace_complete(1, Word::generator(0)) == 1);
  // <y> has index 4
  auto u = todd_coxeter({2, 3, 3}, {Word::generator(1)}, 4096);
  CHECK(u.size() == 4);
}

TEST_CASE("coset cap throws") {
  CHECK_THROWS_AS(todd_coxeter({2, 3, 5}, {}, 10), ResourceExceeded);
}

TEST_SUITE_END();
