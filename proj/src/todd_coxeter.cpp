#include "dessins/todd_coxeter.hpp"

#include <cassert>
#include <deque>

namespace dessins {

namespace {

// Classic HLT enumeration with coincidence handling (union-find over cosets,
// column merging with a merge queue).
class Enumerator {
 public:
  Enumerator(const Presentation& pres, uint32_t max_cosets) : max_(max_cosets) {
    rels_[0] = Word::generator(0).pow(pres.e0).letters();
    rels_[1] = Word::generator(1).pow(pres.e1).letters();
    rels_[2] = (Word::generator(0) * Word::generator(1)).pow(pres.e01).letters();
    for (auto& c : col_) c.assign(2, 0);
    p_.assign(2, 0);
    p_[1] = 1;
    nlive_ = 1;
  }

  void run(const std::vector<Word>& subgens) {
    for (const Word& w : subgens) {
      scan_and_fill(1, w.letters());
      process_queue();
    }
    for (uint32_t a = 1; a < p_.size(); ++a) {
      if (rep(a) != a) continue;
      for (const auto& rel : rels_) {
        scan_and_fill(a, rel);
        process_queue();
        if (rep(a) != a) break;
      }
    }
  }

  CosetTable result() {
    // Compress live cosets and renumber.
    std::vector<uint32_t> newno(p_.size(), 0);
    uint32_t n = 0;
    for (uint32_t i = 1; i < p_.size(); ++i)
      if (rep(i) == i) newno[i] = ++n;
    CosetTable t(n);
    for (uint32_t i = 1; i < p_.size(); ++i) {
      if (rep(i) != i) continue;
      for (int g = 0; g < 2; ++g) {
        uint32_t v = col_[g][i];
        assert(v != 0);
        t.set(g, newno[i], newno[rep(v)]);
      }
    }
    return t.standardized();
  }

 private:
  uint32_t rep(uint32_t k) {
    uint32_t r = k;
    while (p_[r] != r) r = p_[r];
    while (p_[k] != r) {
      uint32_t nk = p_[k];
      p_[k] = r;
      k = nk;
    }
    return r;
  }

  uint32_t define(uint32_t a, int l) {
    if (nlive_ >= max_) throw ResourceExceeded("todd_coxeter: coset limit exceeded");
    uint32_t b = (uint32_t)p_.size();
    p_.push_back(b);
    for (auto& c : col_) c.push_back(0);
    ++nlive_;
    col_[l][a] = b;
    col_[inverse_letter(l)][b] = a;
    return b;
  }

  void merge(uint32_t a, uint32_t b) {
    a = rep(a);
    b = rep(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    p_[b] = a;
    --nlive_;
    queue_.push_back(b);
  }

  void process_queue() {
    while (!queue_.empty()) {
      uint32_t g = queue_.front();
      queue_.pop_front();
      for (int l = 0; l < 4; ++l) {
        uint32_t d = col_[l][g];
        if (d == 0) continue;
        col_[inverse_letter(l)][d] = 0;  // will be re-entered below
        col_[l][g] = 0;
        uint32_t mu = rep(g), nu = rep(d);
        uint32_t ex = col_[l][mu];
        if (ex != 0) merge(nu, ex);
        else {
          col_[l][mu] = nu;
          uint32_t ex2 = col_[inverse_letter(l)][nu];
          if (ex2 != 0) merge(mu, ex2);
          else col_[inverse_letter(l)][nu] = mu;
        }
      }
    }
  }

  void scan_and_fill(uint32_t a, const std::vector<int>& w) {
    if (w.empty()) return;
    long i = 0, j = (long)w.size() - 1;
    uint32_t f = a, b = a;
    while (true) {
      while (i <= j && col_[w[i]][f] != 0) {
        f = col_[w[i]][f];
        ++i;
      }
      if (i > j) {
        if (f != b) merge(f, b);
        return;
      }
      while (j >= i && col_[inverse_letter(w[j])][b] != 0) {
        b = col_[inverse_letter(w[j])][b];
        --j;
      }
      if (j < i) {
        merge(f, b);
        return;
      }
      if (i == j) {
        // Deduction: the single gap is forced.
        col_[w[i]][f] = b;
        uint32_t ex = col_[inverse_letter(w[i])][b];
        if (ex != 0 && ex != f) merge(f, ex);
        else col_[inverse_letter(w[i])][b] = f;
        return;
      }
      define(f, w[i]);  // HLT fill: keep scanning forward
    }
  }

  uint32_t max_;
  std::array<std::vector<int>, 3> rels_{};
  std::array<std::vector<uint32_t>, 4> col_;
  std::vector<uint32_t> p_;
  std::deque<uint32_t> queue_;
  uint32_t nlive_;
};

}  // namespace

CosetTable todd_coxeter(const Presentation& pres, const std::vector<Word>& subgens,
                        uint32_t max_cosets) {
  Enumerator e(pres, max_cosets);
  e.run(subgens);
  return e.result();
}

}  // namespace dessins
