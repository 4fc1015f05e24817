#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dessins {

// Letters of the two-generator alphabet, in the global scan order used for
// table columns and canonical numbering.
enum Letter : int { kG0 = 0, kG1 = 1, kG0inv = 2, kG1inv = 3 };

inline int inverse_letter(int l) { return l ^ 2; }
inline int letter_gen(int l) { return l & 1; }

// Word over {g0, g1}, exponent-compressed: a sequence of syllables
// (gen, exp) with exp != 0 and adjacent syllables on distinct generators.
struct Syllable {
  int gen;        // 0 or 1
  long long exp;  // nonzero; negative = inverse
  bool operator==(const Syllable& o) const { return gen == o.gen && exp == o.exp; }
};

class Word {
 public:
  Word() = default;
  static Word generator(int gen, long long exp = 1);
  static Word from_letters(const std::vector<int>& letters);

  const std::vector<Syllable>& syllables() const { return syl_; }
  bool empty() const { return syl_.empty(); }
  long long length() const;  // expanded letter count

  Word inverse() const;
  Word operator*(const Word& o) const;  // concatenation + free reduction
  Word pow(long long k) const;
  bool operator==(const Word& o) const { return syl_ == o.syl_; }

  std::vector<int> letters() const;  // expanded
  std::string str() const;           // e.g. "x y^-2 x^3" with x=g0, y=g1

  // Append one syllable, merging/cancelling with the tail.
  void push(int gen, long long exp);

 private:
  std::vector<Syllable> syl_;
};

}  // namespace dessins
