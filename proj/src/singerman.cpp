#include "dessins/singerman.hpp"

#include <openssl/sha.h>

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "dessins/quotient.hpp"
#include "dessins/todd_coxeter.hpp"

namespace dessins {

namespace {

Word parse_letters(const std::string& s) {
  Word w;
  for (char c : s) {
    switch (c) {
      case 'a': w.push(0, 1); break;
      case 'A': w.push(0, -1); break;
      case 'b': w.push(1, 1); break;
      case 'B': w.push(1, -1); break;
      default: throw std::invalid_argument("bad word letter");
    }
  }
  return w;
}

std::string word_letters(const Word& w) {
  std::string s;
  for (int l : w.letters()) s.push_back("aAbB"[letter_gen(l) * 2 + (l >= 2 ? 1 : 0)]);
  return s;
}

std::vector<InclusionRule> build_rules() {
  auto S = PatternTerm{1, 0, 0};
  auto T = [](int k) { return PatternTerm{0, k, 0}; };
  auto C = [](int k) { return PatternTerm{0, 0, k}; };
  std::vector<InclusionRule> v;
  auto add = [&v](std::string name, std::array<PatternTerm, 3> sub, std::array<PatternTerm, 3> sup,
                  int index, bool normal, const char* e0, const char* e1) {
    v.push_back({std::move(name), sub, sup, index, normal, parse_letters(e0), parse_letters(e1)});
  };
  // Parametric families.
  add("(s,s,t) < (2,s,2t)", {S, S, T(1)}, {C(2), S, T(2)}, 2, true, "b", "abA");
  add("(t,t,t) < (3,3,t)", {T(1), T(1), T(1)}, {C(3), C(3), T(1)}, 3, true, "BA", "AB");
  add("(t,t,t) < (2,3,2t)", {T(1), T(1), T(1)}, {C(2), C(3), T(2)}, 6, true, "ABAB", "BABA");
  add("(2,t,2t) < (2,3,2t)", {C(2), T(1), T(2)}, {C(2), C(3), T(2)}, 3, false, "abABA", "BABA");
  add("(3,t,3t) < (2,3,3t)", {C(3), T(1), T(3)}, {C(2), C(3), T(3)}, 4, false, "b", "BABABA");
  add("(t,2t,2t) < (2,4,2t)", {T(1), T(2), T(2)}, {C(2), C(4), T(2)}, 4, false, "BaBa", "aB");
  add("(t,4t,4t) < (2,3,4t)", {T(1), T(4), T(4)}, {C(2), C(3), T(4)}, 6, false, "BaBaBaBa", "aB");
  // Sporadic cases.
  add("(2,7,7) < (2,3,7)", {C(2), C(7), C(7)}, {C(2), C(3), C(7)}, 9, false, "BAb", "AbAbA");
  add("(3,3,7) < (2,3,7)", {C(3), C(3), C(7)}, {C(2), C(3), C(7)}, 8, false, "BAbAb", "AbA");
  add("(7,7,7) < (2,3,7)", {C(7), C(7), C(7)}, {C(2), C(3), C(7)}, 24, false, "BaBabaBa",
      "aBaBaBab");
  add("(3,8,8) < (2,3,8)", {C(3), C(8), C(8)}, {C(2), C(3), C(8)}, 10, false, "BAbAb", "AbAbA");
  add("(4,8,8) < (2,3,8)", {C(4), C(8), C(8)}, {C(2), C(3), C(8)}, 12, false, "bABAb", "AbAbA");
  add("(9,9,9) < (2,3,9)", {C(9), C(9), C(9)}, {C(2), C(3), C(9)}, 12, false, "BAbAbAb",
      "AbAbA");
  add("(4,4,5) < (2,4,5)", {C(4), C(4), C(5)}, {C(2), C(4), C(5)}, 6, false, "BAbAb", "AbA");
  return v;
}

// The generating-pair rearrangements as word pairs over (x, y); entry k maps
// the order triple (|x|,|y|,|xy|) by the k-th permutation of its positions.
const std::array<std::pair<Word, Word>, kNumPairTransforms>& pair_transforms() {
  static const auto t = [] {
    Word x = Word::generator(0), y = Word::generator(1);
    Word X = x.inverse(), Y = y.inverse();
    return std::array<std::pair<Word, Word>, kNumPairTransforms>{{
        {x, y},              // (p,q,r)
        {y, Y * X},          // (q,r,p)
        {Y * X, x},          // (r,p,q)
        {y, Y * x * y},      // (q,p,r)
        {Y * X, x * y * X},  // (r,q,p)
        {x, X * Y},          // (p,r,q)
    }};
  }();
  return t;
}

uint32_t word_cycle_len(const CosetTable& t, uint32_t start, const Word& w) {
  uint32_t c = start, len = 0;
  do {
    c = t.trace_complete(c, w);
    ++len;
  } while (c != start);
  return len;
}

Word substitute(const Word& w, const Word& e0, const Word& e1) {
  Word out;
  for (const Syllable& s : w.syllables()) {
    const Word& img = s.gen == 0 ? e0 : e1;
    out = out * img.pow(s.exp);
  }
  return out;
}

Rat mu_of(const std::array<int, 3>& e) { return deficiency_raw(e[0], e[1], e[2]); }

}  // namespace

const std::vector<InclusionRule>& inclusion_rules() {
  static const std::vector<InclusionRule> rules = build_rules();
  return rules;
}

std::string inclusion_rules_json() {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  auto term = [](const PatternTerm& p) {
    return nlohmann::ordered_json{{"cs", p.cs}, {"ct", p.ct}, {"c", p.c}};
  };
  for (const auto& r : inclusion_rules()) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["sub"] = {term(r.sub[0]), term(r.sub[1]), term(r.sub[2])};
    j["sup"] = {term(r.sup[0]), term(r.sup[1]), term(r.sup[2])};
    j["index"] = r.index;
    j["normal"] = r.normal;
    j["e0"] = word_letters(r.e0);
    j["e1"] = word_letters(r.e1);
    arr.push_back(std::move(j));
  }
  nlohmann::ordered_json top;
  top["version"] = 1;
  top["rules"] = std::move(arr);
  return top.dump(2) + "\n";
}

std::string inclusion_rules_checksum() {
  std::string j = inclusion_rules_json();
  Digest d{};
  SHA256(reinterpret_cast<const uint8_t*>(j.data()), j.size(), d.data());
  return digest_hex(d);
}

std::vector<RuleInstance> instances_for(const Signature& sig) {
  std::vector<RuleInstance> out;
  std::set<std::tuple<const InclusionRule*, int, int>> seen;
  int vals[3] = {sig.p, sig.q, sig.r};
  int perm[3] = {0, 1, 2};
  for (const auto& rule : inclusion_rules()) {
    std::sort(perm, perm + 3);
    do {
      // Solve sub[i](s,t) = vals[perm[i]] for (s,t).
      int s = 0, t = 0;
      bool ok = true;
      for (int i = 0; i < 3 && ok; ++i) {
        const PatternTerm& pt = rule.sub[i];
        int v = vals[perm[i]] - pt.c;
        if (pt.cs == 0 && pt.ct == 0) ok = v == 0;
        else if (pt.cs != 0 && pt.ct == 0) {
          if (v % pt.cs != 0 || v / pt.cs < 2) ok = false;
          else if (s == 0) s = v / pt.cs;
          else ok = s == v / pt.cs;
        } else if (pt.ct != 0 && pt.cs == 0) {
          if (v % pt.ct != 0 || v / pt.ct < 2) ok = false;
          else if (t == 0) t = v / pt.ct;
          else ok = t == v / pt.ct;
        } else ok = false;
      }
      if (!ok || !seen.insert({&rule, s, t}).second) continue;
      RuleInstance inst;
      inst.rule = &rule;
      inst.s = s;
      inst.t = t;
      for (int i = 0; i < 3; ++i) {
        inst.sub_orders[i] = rule.sub[i].eval(s, t);
        inst.sup_exps[i] = rule.sup[i].eval(s, t);
      }
      if (inst.sup_exps[0] < 2 || inst.sup_exps[1] < 2 || inst.sup_exps[2] < 2) continue;
      auto sub_sig = Signature::make(inst.sub_orders[0], inst.sub_orders[1], inst.sub_orders[2]);
      auto sup_sig = Signature::make(inst.sup_exps[0], inst.sup_exps[1], inst.sup_exps[2]);
      if (!sub_sig || !sup_sig || *sub_sig != sig) continue;
      // Area ratio must equal the index; holds identically for correct rules.
      if (mu_of(inst.sub_orders) != mu_of(inst.sup_exps) * rule.index) continue;
      inst.sub_sig = *sub_sig;
      inst.sup_sig = *sup_sig;
      out.push_back(std::move(inst));
    } while (std::next_permutation(perm, perm + 3));
  }
  return out;
}

ValidationReport validate_rule(const RuleInstance& inst,
                               const std::vector<CosetTable>& super_quotients) {
  ValidationReport rep;
  auto fail = [&rep](std::string m) {
    rep.ok = false;
    rep.issues.push_back(std::move(m));
  };
  auto pass = [&rep](std::string m) { rep.checks.push_back(std::move(m)); };
  const InclusionRule& r = *inst.rule;
  if (r.index > 24) fail(r.name + ": index exceeds the triangle-group maximum 24");
  if (mu_of(inst.sub_orders) == mu_of(inst.sup_exps) * r.index)
    pass(r.name + ": deficiency ratio equals index");
  else
    fail(r.name + ": deficiency ratio does not equal index");
  Presentation pres{inst.sup_exps[0], inst.sup_exps[1], inst.sup_exps[2]};
  CosetTable t;
  try {
    t = todd_coxeter(pres, {r.e0, r.e1}, 200u * r.index + 2000);
  } catch (const ResourceExceeded&) {
    fail(r.name + ": coset enumeration over the embedding exceeded its budget");
    return rep;
  }
  if (t.size() == (uint32_t)r.index) pass(r.name + ": embedding generates index " +
                                          std::to_string(r.index));
  else {
    fail(r.name + ": embedding index " + std::to_string(t.size()) + " != " +
         std::to_string(r.index));
    return rep;
  }
  // Stabilizer periods from cycle structure, and quotient genus 0.
  std::vector<int> periods;
  Rat frac(0);
  Word words[3] = {Word::generator(0), Word::generator(1),
                   Word::generator(0) * Word::generator(1)};
  for (int wi = 0; wi < 3; ++wi) {
    std::vector<bool> seen(t.size() + 1, false);
    for (uint32_t c = 1; c <= t.size(); ++c) {
      if (seen[c]) continue;
      uint32_t x = c, len = 0;
      do {
        seen[x] = true;
        x = t.trace_complete(x, words[wi]);
        ++len;
      } while (x != c);
      int full = inst.sup_exps[wi];
      if ((int)len < full) {
        periods.push_back(full / (int)len);
        frac += Rat(1) - Rat(1, full / (int)len);
      }
    }
  }
  std::vector<int> want(inst.sub_orders.begin(), inst.sub_orders.end());
  std::sort(want.begin(), want.end());
  std::sort(periods.begin(), periods.end());
  if (periods == want) pass(r.name + ": stabilizer periods match the sub signature");
  else fail(r.name + ": stabilizer periods do not match the sub signature");
  // n*mu(sup) = 2g - 2 + sum(1 - 1/m) must give g = 0.
  Rat g = (Rat(r.index) * mu_of(inst.sup_exps) - frac + 2) / 2;
  if (g == Rat(0)) pass(r.name + ": stabilizer genus 0");
  else fail(r.name + ": stabilizer genus " + std::to_string(boost::rational_cast<double>(g)));
  // Rewritten sub relators must act trivially on every supplied quotient.
  Word rel[3] = {r.e0.pow(inst.sub_orders[0]), r.e1.pow(inst.sub_orders[1]),
                 (r.e0 * r.e1).pow(inst.sub_orders[2])};
  size_t traced = 0;
  for (const CosetTable& qt : super_quotients) {
    for (int wi = 0; wi < 3; ++wi)
      for (uint32_t c = 1; c <= qt.size(); ++c)
        if (qt.trace_complete(c, rel[wi]) != c) {
          fail(r.name + ": rewritten relator fails to close on a super-group quotient");
          return rep;
        }
    ++traced;
  }
  if (traced > 0)
    pass(r.name + ": rewritten relators close on " + std::to_string(traced) +
         " super-group quotient table(s)");
  return rep;
}

CosetTable transform_pair(const CosetTable& t, int k) {
  const auto& [w0, w1] = pair_transforms()[k];
  CosetTable nt(t.size());
  for (uint32_t c = 1; c <= t.size(); ++c) {
    nt.set(0, c, t.trace_complete(c, w0));
    nt.set(1, c, t.trace_complete(c, w1));
  }
  return nt.standardized();
}

std::array<uint32_t, 3> transform_orders(const CosetTable& t, int k) {
  const auto& [w0, w1] = pair_transforms()[k];
  return {word_cycle_len(t, 1, w0), word_cycle_len(t, 1, w1), word_cycle_len(t, 1, w0 * w1)};
}

std::vector<CosetTable> sigma_variants(const CosetTable& t) {
  std::array<uint32_t, 3> base = transform_orders(t, 0);
  std::vector<CosetTable> out;
  for (int k = 0; k < kNumPairTransforms; ++k) {
    if (transform_orders(t, k) != base) continue;
    CosetTable v = transform_pair(t, k);
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
  }
  return out;
}

std::optional<ExtensionResult> try_extend(const Signature& sig, const CosetTable& t,
                                          const RuleInstance& inst) {
  if (inst.sub_sig != sig) return std::nullopt;
  uint32_t n = t.size();
  uint32_t target = n * (uint32_t)inst.rule->index;
  std::array<uint32_t, 3> want{(uint32_t)inst.sub_orders[0], (uint32_t)inst.sub_orders[1],
                               (uint32_t)inst.sub_orders[2]};
  Presentation pres{inst.sup_exps[0], inst.sup_exps[1], inst.sup_exps[2]};
  for (int k = 0; k < kNumPairTransforms; ++k) {
    if (transform_orders(t, k) != want) continue;
    CosetTable u = transform_pair(t, k);
    std::vector<Word> gens;
    for (const Word& g : u.schreier_generators())
      gens.push_back(substitute(g, inst.rule->e0, inst.rule->e1));
    CosetTable sup;
    try {
      sup = todd_coxeter(pres, gens, target + target / 4 + 64);
    } catch (const ResourceExceeded&) {
      // HLT can overshoot the final index before coincidences collapse it;
      // retry once with generous room before giving up.
      sup = todd_coxeter(pres, gens, 64 * target + 4096);
    }
    if (sup.size() != target) continue;
    if (permutation_group_order(sup, target) != target) continue;  // not normal
    // Convert to the sorted-signature arrangement; pick the smallest
    // serialization when several rearrangements match (repeated orders).
    std::array<uint32_t, 3> sorted_exps{(uint32_t)inst.sup_sig.p, (uint32_t)inst.sup_sig.q,
                                        (uint32_t)inst.sup_sig.r};
    std::optional<CosetTable> best;
    std::vector<uint8_t> best_bytes;
    for (int j = 0; j < kNumPairTransforms; ++j) {
      if (transform_orders(sup, j) != sorted_exps) continue;
      CosetTable cand = transform_pair(sup, j);
      std::vector<uint8_t> bytes = cand.serialize();
      if (!best || bytes < best_bytes) {
        best = std::move(cand);
        best_bytes = std::move(bytes);
      }
    }
    if (!best) continue;
    return ExtensionResult{inst.sup_sig, target, std::move(*best)};
  }
  return std::nullopt;
}

ExtensionResult maximal_closure(const Signature& sig, const CosetTable& t) {
  Signature cur_sig = sig;
  CosetTable cur = t.is_standard() ? t : t.standardized();
  for (;;) {
    bool extended = false;
    for (const RuleInstance& inst : instances_for(cur_sig)) {
      if (auto r = try_extend(cur_sig, cur, inst)) {
        cur_sig = r->sup_sig;
        cur = std::move(r->table);
        extended = true;
        break;
      }
    }
    if (!extended) return ExtensionResult{cur_sig, cur.size(), std::move(cur)};
  }
}

}  // namespace dessins
