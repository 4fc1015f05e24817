#pragma once

// Independent brute-force oracles used by the tests: subgroup counting in
// Z_m x Z_m and generating-pair counting in PSL(2,7).  Deliberately naive
// and self-contained so they share no code with the library under test.

#include <algorithm>
#include <array>
#include <cstdint>
#include <set>
#include <vector>

namespace oracles {

// Subgroups of Z_m x Z_m of index <= n_max, and how many of them are
// torsion-free kernels of the (m,m,m) triangle group: the generator images
// are (1,0), (0,1) and (1,1), and all three must keep order exactly m in
// the quotient.  Valid as a normal-subgroup oracle whenever every quotient
// of order <= n_max is abelian (true for n_max <= 5, and for n_max = m = 7:
// the only nonabelian group of order <= 7 is S3, whose elements cannot
// satisfy x^7 = 1 nontrivially).
struct AbelianCounts {
  uint64_t total = 0;
  uint64_t torsion_free = 0;
};

inline AbelianCounts count_subgroups_zm2(int m, int n_max) {
  const int sz = m * m;
  auto idx = [m](int a, int b) { return a * m + b; };
  // Every subgroup of Z_m x Z_m is generated by two elements.
  std::set<std::vector<char>> seen;
  AbelianCounts out;
  for (int g1 = 0; g1 < sz; ++g1) {
    for (int g2 = g1; g2 < sz; ++g2) {
      std::vector<char> in(sz, 0);
      std::vector<int> frontier = {g1, g2};
      in[idx(0, 0)] = 1;
      std::vector<int> members = {idx(0, 0)};
      while (!frontier.empty()) {
        int e = frontier.back();
        frontier.pop_back();
        if (in[e]) continue;
        in[e] = 1;
        members.push_back(e);
        for (size_t k = 0; k < members.size(); ++k) {
          int a = (members[k] / m + e / m) % m, b = (members[k] % m + e % m) % m;
          if (!in[idx(a, b)]) frontier.push_back(idx(a, b));
        }
      }
      if (sz % (int)members.size() != 0) continue;  // cannot happen; safety
      int index = sz / (int)members.size();
      if (index > n_max) continue;
      if (!seen.insert(in).second) continue;
      ++out.total;
      // order of v modulo the subgroup: least k > 0 with k*v inside
      auto ord = [&](int a, int b) {
        for (int k = 1; k <= m; ++k)
          if (in[idx(k * a % m, k * b % m)]) return k;
        return 0;
      };
      if (ord(1, 0) == m && ord(0, 1) == m && ord(1, 1) == m) ++out.torsion_free;
    }
  }
  return out;
}

// PSL(2,7) as canonical matrices over F_7 modulo +-1, with a full
// multiplication table.  168 elements.
struct Psl27 {
  std::vector<std::array<int, 4>> elems;  // (a,b,c,d), det = 1, canonical sign
  std::vector<std::vector<int>> mul;      // element indices
  std::vector<int> order;

  static std::array<int, 4> canon(std::array<int, 4> v) {
    std::array<int, 4> w{(7 - v[0]) % 7, (7 - v[1]) % 7, (7 - v[2]) % 7, (7 - v[3]) % 7};
    return std::min(v, w);
  }

  Psl27() {
    std::set<std::array<int, 4>> s;
    for (int a = 0; a < 7; ++a)
      for (int b = 0; b < 7; ++b)
        for (int c = 0; c < 7; ++c)
          for (int d = 0; d < 7; ++d)
            if ((a * d - b * c) % 7 == 1 || (a * d - b * c) % 7 == 1 - 7)
              s.insert(canon({a, b, c, d}));
    elems.assign(s.begin(), s.end());
    auto find = [&](const std::array<int, 4>& v) {
      return (int)(std::lower_bound(elems.begin(), elems.end(), v) - elems.begin());
    };
    int n = (int)elems.size();
    mul.assign(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        auto& x = elems[i];
        auto& y = elems[j];
        mul[i][j] = find(canon({(x[0] * y[0] + x[1] * y[2]) % 7, (x[0] * y[1] + x[1] * y[3]) % 7,
                                (x[2] * y[0] + x[3] * y[2]) % 7, (x[2] * y[1] + x[3] * y[3]) % 7}));
      }
    int id = find({1, 0, 0, 1});
    order.assign(n, 0);
    for (int i = 0; i < n; ++i) {
      int e = i, k = 1;
      while (e != id) {
        e = mul[e][i];
        ++k;
      }
      order[i] = k;
    }
  }

  size_t closure_size(int x, int y) const {
    std::vector<char> in(elems.size(), 0);
    std::vector<int> q = {x, y}, mem;
    while (!q.empty()) {
      int e = q.back();
      q.pop_back();
      if (in[e]) continue;
      in[e] = 1;
      mem.push_back(e);
      for (int f : mem) {
        if (!in[mul[e][f]]) q.push_back(mul[e][f]);
        if (!in[mul[f][e]]) q.push_back(mul[f][e]);
      }
    }
    return mem.size();
  }

  // Generating pairs (x,y) with |x|=2, |y|=3, |xy|=7.
  uint64_t hurwitz_pairs() const {
    uint64_t count = 0;
    for (size_t x = 0; x < elems.size(); ++x) {
      if (order[x] != 2) continue;
      for (size_t y = 0; y < elems.size(); ++y) {
        if (order[y] != 3 || order[mul[x][y]] != 7) continue;
        if (closure_size((int)x, (int)y) == elems.size()) ++count;
      }
    }
    return count;
  }
};

}  // namespace oracles
