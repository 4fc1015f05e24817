#include "dessins/coset_table.hpp"

#include <cassert>
#include <cstring>
#include <stdexcept>

namespace dessins {

CosetTable::CosetTable(uint32_t n) : n_(n) {
  for (auto& c : col_) c.assign(n + 1, 0);
}

void CosetTable::set(int gen, uint32_t from, uint32_t to) {
  assert(gen == 0 || gen == 1);
  col_[gen][from] = to;
  col_[gen + 2][to] = from;
}

bool CosetTable::complete() const {
  for (int l = 0; l < 4; ++l)
    for (uint32_t i = 1; i <= n_; ++i)
      if (col_[l][i] == 0) return false;
  return n_ > 0;
}

std::optional<uint32_t> CosetTable::trace(uint32_t start, const Word& w) const {
  uint32_t c = start;
  for (const auto& s : w.syllables()) {
    int l = s.gen + (s.exp < 0 ? 2 : 0);
    long long reps = s.exp < 0 ? -s.exp : s.exp;
    for (long long i = 0; i < reps; ++i) {
      c = col_[l][c];
      if (c == 0) return std::nullopt;
    }
  }
  return c;
}

uint32_t CosetTable::trace_complete(uint32_t start, const Word& w) const {
  auto r = trace(start, w);
  assert(r);
  return *r;
}

CosetTable CosetTable::standardized() const {
  // Renumber by first appearance under the canonical scan.
  std::vector<uint32_t> to_new(n_ + 1, 0), to_old(n_ + 1, 0);
  uint32_t next = 1;
  to_new[1] = 1;
  to_old[1] = 1;
  for (uint32_t i = 1; i <= n_; ++i) {
    uint32_t old_i = to_old[i];
    if (old_i == 0) throw std::runtime_error("standardize: table not transitive/complete");
    for (int l = 0; l < 4; ++l) {
      uint32_t t = col_[l][old_i];
      if (t == 0) throw std::runtime_error("standardize: incomplete table");
      if (to_new[t] == 0) {
        ++next;
        to_new[t] = next;
        to_old[next] = t;
      }
    }
  }
  if (next != n_) throw std::runtime_error("standardize: table not transitive");
  CosetTable out(n_);
  for (uint32_t i = 1; i <= n_; ++i)
    for (int g = 0; g < 2; ++g) out.set(g, to_new[i], to_new[col_[g][i]]);
  return out;
}

bool CosetTable::is_standard() const {
  uint32_t seen = 1;
  for (uint32_t i = 1; i <= n_; ++i) {
    if (i > seen) return false;
    for (int l = 0; l < 4; ++l) {
      uint32_t t = col_[l][i];
      if (t == 0) return false;
      if (t == seen + 1) ++seen;
      else if (t > seen + 1) return false;
    }
  }
  return seen == n_;
}

std::vector<uint8_t> CosetTable::serialize() const {
  std::vector<uint8_t> out;
  out.reserve(4 + 8 * n_);
  auto put = [&out](uint32_t v) {
    out.push_back(v & 0xff);
    out.push_back((v >> 8) & 0xff);
    out.push_back((v >> 16) & 0xff);
    out.push_back((v >> 24) & 0xff);
  };
  put(n_);
  for (int g = 0; g < 2; ++g)
    for (uint32_t i = 1; i <= n_; ++i) put(col_[g][i]);
  return out;
}

std::optional<CosetTable> CosetTable::deserialize(const std::vector<uint8_t>& bytes) {
  auto get = [&bytes](size_t off) -> uint32_t {
    return (uint32_t)bytes[off] | ((uint32_t)bytes[off + 1] << 8) | ((uint32_t)bytes[off + 2] << 16) |
           ((uint32_t)bytes[off + 3] << 24);
  };
  if (bytes.size() < 4) return std::nullopt;
  uint32_t n = get(0);
  if (bytes.size() != 4 + 8ull * n) return std::nullopt;
  CosetTable t(n);
  for (int g = 0; g < 2; ++g)
    for (uint32_t i = 1; i <= n; ++i) {
      uint32_t v = get(4 + (g * (size_t)n + (i - 1)) * 4);
      if (v < 1 || v > n) return std::nullopt;
      t.set(g, i, v);
    }
  return t;
}

std::vector<Word> CosetTable::transversal() const {
  std::vector<Word> rep(n_ + 1);
  std::vector<bool> have(n_ + 1, false);
  have[1] = true;
  // Canonical scan = BFS order for a standard table.
  for (uint32_t i = 1; i <= n_; ++i) {
    if (!have[i]) throw std::runtime_error("transversal: nonstandard or incomplete table");
    for (int l = 0; l < 4; ++l) {
      uint32_t t = col_[l][i];
      if (t != 0 && !have[t]) {
        rep[t] = rep[i] * Word::generator(letter_gen(l), (l & 2) ? -1 : 1);
        have[t] = true;
      }
    }
  }
  return rep;
}

std::vector<Word> CosetTable::schreier_generators() const {
  std::vector<Word> rep = transversal();
  // Mark tree edges: the first edge reaching each coset in scan order.
  std::vector<bool> reached(n_ + 1, false);
  reached[1] = true;
  std::vector<std::pair<uint32_t, int>> tree;  // (from, letter)
  for (uint32_t i = 1; i <= n_; ++i)
    for (int l = 0; l < 4; ++l) {
      uint32_t t = col_[l][i];
      if (t != 0 && !reached[t]) {
        reached[t] = true;
        tree.push_back({i, l});
      }
    }
  auto is_tree = [&tree](uint32_t i, int l) {
    for (auto& e : tree)
      if (e.first == i && e.second == l) return true;
    return false;
  };
  std::vector<Word> gens;
  for (uint32_t i = 1; i <= n_; ++i)
    for (int g = 0; g < 2; ++g) {
      uint32_t t = col_[g][i];
      if (t == 0) continue;
      // A tree edge may have been recorded via the generator letter or via
      // its inverse from the other endpoint.
      if (is_tree(i, g) || is_tree(t, g + 2)) continue;
      gens.push_back(rep[i] * Word::generator(g) * rep[t].inverse());
    }
  return gens;
}

bool CosetTable::relators_close(const Presentation& pres) const {
  Word r0 = Word::generator(0).pow(pres.e0);
  Word r1 = Word::generator(1).pow(pres.e1);
  Word r01 = (Word::generator(0) * Word::generator(1)).pow(pres.e01);
  for (uint32_t i = 1; i <= n_; ++i)
    for (const Word* w : {&r0, &r1, &r01}) {
      auto t = trace(i, *w);
      if (!t || *t != i) return false;
    }
  return true;
}

}  // namespace dessins
