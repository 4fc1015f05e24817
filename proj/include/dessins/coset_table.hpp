#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "dessins/word.hpp"

namespace dessins {

// Relator exponents of a triangle presentation <x, y | x^e0, y^e1, (xy)^e01>.
// Not necessarily sorted: embeddings may present a group with the orders in
// any arrangement.
struct Presentation {
  int e0 = 0, e1 = 0, e01 = 0;
};

// Complete or partial coset table over the 4-letter alphabet.  Cosets are
// 1-based; 0 marks an undefined entry.  col[l][i] is the image of coset i
// under letter l; inverse columns are kept consistent.
class CosetTable {
 public:
  CosetTable() = default;
  explicit CosetTable(uint32_t n);

  uint32_t size() const { return n_; }
  uint32_t get(int letter, uint32_t coset) const { return col_[letter][coset]; }
  void set(int gen, uint32_t from, uint32_t to);  // fills gen and inverse entries
  bool complete() const;

  std::optional<uint32_t> trace(uint32_t start, const Word& w) const;
  uint32_t trace_complete(uint32_t start, const Word& w) const;  // complete tables only

  // Canonical renumbering: scanning cosets in increasing order and letters in
  // the fixed order (g0, g1, g0^-1, g1^-1), coset m+1 first appears before
  // coset m+2.  Requires a complete transitive table.
  CosetTable standardized() const;
  bool is_standard() const;

  // Canonical bytes: LE32 n, then the g0 column, then the g1 column.
  std::vector<uint8_t> serialize() const;
  static std::optional<CosetTable> deserialize(const std::vector<uint8_t>& bytes);

  // Schreier generators of the pointed subgroup (stabilizer of coset 1)
  // relative to the BFS spanning tree of a standard table: exactly n+1 words,
  // one per non-tree generator edge, freely reduced.
  std::vector<Word> schreier_generators() const;
  // Spanning-tree representative words for each coset of a standard table.
  std::vector<Word> transversal() const;

  // Do all three relators of the presentation close at every coset?
  bool relators_close(const Presentation& pres) const;

  bool operator==(const CosetTable& o) const { return n_ == o.n_ && col_ == o.col_; }

 private:
  uint32_t n_ = 0;
  std::array<std::vector<uint32_t>, 4> col_;
};

}  // namespace dessins
