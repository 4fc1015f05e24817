#include "dessins/word.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace dessins {

Word Word::generator(int gen, long long exp) {
  Word w;
  w.push(gen, exp);
  return w;
}

Word Word::from_letters(const std::vector<int>& letters) {
  Word w;
  for (int l : letters) w.push(letter_gen(l), (l & 2) ? -1 : 1);
  return w;
}

void Word::push(int gen, long long exp) {
  if (exp == 0) return;
  if (!syl_.empty() && syl_.back().gen == gen) {
    syl_.back().exp += exp;
    if (syl_.back().exp == 0) {
      syl_.pop_back();
      // Cancellation may expose another mergeable pair; handled by callers
      // always pushing one syllable at a time through this method.
      return;
    }
    return;
  }
  syl_.push_back({gen, exp});
}

long long Word::length() const {
  long long n = 0;
  for (const auto& s : syl_) n += std::llabs(s.exp);
  return n;
}

Word Word::inverse() const {
  Word w;
  for (auto it = syl_.rbegin(); it != syl_.rend(); ++it) w.push(it->gen, -it->exp);
  return w;
}

Word Word::operator*(const Word& o) const {
  Word w = *this;
  for (const auto& s : o.syl_) w.push(s.gen, s.exp);
  return w;
}

Word Word::pow(long long k) const {
  Word base = k < 0 ? inverse() : *this;
  long long reps = std::llabs(k);
  Word w;
  for (long long i = 0; i < reps; ++i) w = w * base;
  return w;
}

std::vector<int> Word::letters() const {
  std::vector<int> out;
  out.reserve(length());
  for (const auto& s : syl_) {
    int l = s.gen + (s.exp < 0 ? 2 : 0);
    for (long long i = 0; i < std::llabs(s.exp); ++i) out.push_back(l);
  }
  return out;
}

std::string Word::str() const {
  if (syl_.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& s : syl_) {
    if (!first) os << ' ';
    first = false;
    os << (s.gen == 0 ? 'x' : 'y');
    if (s.exp != 1) os << '^' << s.exp;
  }
  return os.str();
}

}  // namespace dessins
