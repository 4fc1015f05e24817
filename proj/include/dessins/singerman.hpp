#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dessins/coset_table.hpp"
#include "dessins/signature.hpp"
#include "dessins/word.hpp"

namespace dessins {

// Linear pattern in the two rule parameters: value = cs*s + ct*t + c.
struct PatternTerm {
  int cs = 0, ct = 0, c = 0;
  int eval(int s, int t) const { return cs * s + ct * t + c; }
};

// One inclusion pattern D(sub) < D(sup) between triangle groups, with words
// e0, e1 over the super group's generators presenting the subgroup: the
// orders of (e0, e1, e0*e1) are the sub terms, in that arrangement.
struct InclusionRule {
  std::string name;
  std::array<PatternTerm, 3> sub;
  std::array<PatternTerm, 3> sup;
  int index = 0;
  bool normal = false;
  Word e0, e1;
};

// The static rule table (parametric families plus sporadic cases).
const std::vector<InclusionRule>& inclusion_rules();
// Versioned structured dump of the table and its content checksum.
std::string inclusion_rules_json();
std::string inclusion_rules_checksum();

// A concrete instantiation of a rule at parameter values (s, t).
struct RuleInstance {
  const InclusionRule* rule = nullptr;
  int s = 0, t = 0;
  std::array<int, 3> sub_orders{};  // orders of (e0, e1, e0e1)
  std::array<int, 3> sup_exps{};    // super presentation exponents (x, y, xy)
  Signature sub_sig;                // sorted
  Signature sup_sig;                // sorted
};

// All instantiations whose sorted sub signature equals sig and whose super
// signature is hyperbolic with all exponents >= 2.
std::vector<RuleInstance> instances_for(const Signature& sig);

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> checks;  // human-readable pass lines
  std::vector<std::string> issues;  // failures
};

// Checks an instantiation: the coset enumeration over (e0, e1) in the super
// group yields exactly rule->index cosets; the point stabilizer's periods,
// read off the cycle structure, are exactly sub_orders with quotient genus 0;
// the deficiency ratio equals the index.  Each super-group quotient table
// supplied additionally has the rewritten sub relators traced at every coset.
ValidationReport validate_rule(const RuleInstance& inst,
                               const std::vector<CosetTable>& super_quotients = {});

// The 6 generating-pair rearrangements (x,y) -> (x',y') permuting the order
// triple (|x|, |y|, |xy|); index 0 is the identity.
constexpr int kNumPairTransforms = 6;
// Table of the transformed pair's action, standardized; t must be complete.
CosetTable transform_pair(const CosetTable& t, int k);
std::array<uint32_t, 3> transform_orders(const CosetTable& t, int k);

// Standardized tables of every rearrangement that preserves the sorted order
// triple (the conjugation action of the signature's symmetries on kernels);
// includes the table itself, duplicates removed.
std::vector<CosetTable> sigma_variants(const CosetTable& t);

struct ExtensionResult {
  Signature sup_sig;
  uint32_t sup_index = 0;
  CosetTable table;  // standardized, sorted-signature arrangement
};

// Tests whether the kernel presented by the (sorted-arrangement) table over
// sig is also normal in the instance's super group: rewrites the kernel's
// Schreier generators through the embedding, enumerates their cosets there,
// and keeps the result iff the action is regular at index n * rule->index.
std::optional<ExtensionResult> try_extend(const Signature& sig, const CosetTable& t,
                                          const RuleInstance& inst);

// Fixpoint of try_extend over all applicable instances: the record over the
// largest triangle group in which the kernel is normal.
ExtensionResult maximal_closure(const Signature& sig, const CosetTable& t);

}  // namespace dessins
