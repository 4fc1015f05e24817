#include "dessins/signature.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace dessins {

Rat deficiency_raw(int p, int q, int r) {
  return Rat(1) - Rat(1, p) - Rat(1, q) - Rat(1, r);
}

std::optional<Signature> Signature::make(int p, int q, int r) {
  if (p < 2 || q < 2 || r < 2) return std::nullopt;
  int v[3] = {p, q, r};
  std::sort(v, v + 3);
  Rat mu = deficiency_raw(v[0], v[1], v[2]);
  if (mu <= Rat(0)) return std::nullopt;
  assert(mu >= Rat(1, 42));
  Signature s;
  s.p = v[0];
  s.q = v[1];
  s.r = v[2];
  s.mu = mu;
  return s;
}

bool Signature::operator<(const Signature& o) const {
  if (p != o.p) return p < o.p;
  if (q != o.q) return q < o.q;
  return r < o.r;
}

std::string Signature::str() const {
  std::ostringstream os;
  os << p << ',' << q << ',' << r;
  return os.str();
}

std::optional<Signature> Signature::parse(const std::string& s) {
  int v[3];
  char c1, c2;
  std::istringstream is(s);
  if (!(is >> v[0] >> c1 >> v[1] >> c2 >> v[2]) || c1 != ',' || c2 != ',') return std::nullopt;
  std::string rest;
  if (is >> rest) return std::nullopt;
  return make(v[0], v[1], v[2]);
}

std::optional<long long> index_of_genus(const Signature& s, int genus) {
  if (genus < 2) return std::nullopt;
  Rat n = Rat(2 * genus - 2) / s.mu;
  if (n.denominator() != 1) return std::nullopt;
  long long idx = n.numerator();
  if (idx < 2) return std::nullopt;
  // Riemann-Hurwitz sandwich: 2g-2 < n <= 84(g-1).
  assert(idx > 2 * genus - 2 && idx <= 84LL * (genus - 1));
  return idx;
}

std::optional<int> genus_of_index(const Signature& s, long long n) {
  if (n < 2) return std::nullopt;
  Rat g = Rat(1) + Rat(n) * s.mu / Rat(2);
  if (g.denominator() != 1) return std::nullopt;
  long long genus = g.numerator();
  if (genus < 2) return std::nullopt;
  return static_cast<int>(genus);
}

std::vector<AdmissibleSignature> admissible_signatures(int g_max) {
  std::vector<AdmissibleSignature> out;
  if (g_max < 2) return out;
  const long long rmax = 84LL * g_max;
  for (long long p = 2; p <= rmax; ++p) {
    // mu > 0 needs 1/q + 1/r < 1 - 1/p; with q,r >= p that needs p >= 2 and
    // for p > 3 every q,r >= p works, but divisibility caps p at 84(g-1).
    if (p > 84LL * (g_max - 1)) break;
    for (long long q = p; q <= rmax; ++q) {
      bool any_q = false;
      for (long long r = q; r <= rmax; ++r) {
        // mu = (pqr - qr - pr - pq) / pqr, exact in 64-bit (rmax <= 840).
        long long num = p * q * r - q * r - p * r - p * q;
        if (num <= 0) continue;
        std::vector<GenusIndex> pairs;
        for (int g = 2; g <= g_max; ++g) {
          long long target = (2LL * g - 2) * p * q * r;
          if (target % num != 0) continue;
          long long n = target / num;
          if (n < 2) continue;
          if (n % p != 0 || n % q != 0 || n % r != 0) continue;
          pairs.push_back({g, n});
        }
        if (!pairs.empty()) {
          auto sig = Signature::make((int)p, (int)q, (int)r);
          assert(sig);
          out.push_back({*sig, std::move(pairs)});
          any_q = true;
        }
        // Once r exceeds 84(g_max-1), r | n is impossible (n <= 84(g-1)).
        if (r > 84LL * (g_max - 1)) break;
      }
      (void)any_q;
      if (q > 84LL * (g_max - 1)) break;
    }
  }
  std::sort(out.begin(), out.end(),
            [](const AdmissibleSignature& a, const AdmissibleSignature& b) { return a.sig < b.sig; });
  return out;
}

std::vector<long long> smith_diagonal(std::vector<std::vector<long long>> m) {
  size_t rows = m.size();
  size_t cols = rows ? m[0].size() : 0;
  size_t rank = std::min(rows, cols);
  std::vector<long long> diag;
  for (size_t t = 0; t < rank; ++t) {
    // Pivot on the smallest nonzero entry of the trailing block: every swap
    // below strictly shrinks |pivot|, so the reduction terminates.
    size_t pi = rows, pj = cols;
    for (size_t i = t; i < rows; ++i)
      for (size_t j = t; j < cols; ++j)
        if (m[i][j] != 0 && (pi == rows || std::llabs(m[i][j]) < std::llabs(m[pi][pj]))) {
          pi = i;
          pj = j;
        }
    if (pi == rows) break;  // trailing block is zero
    std::swap(m[t], m[pi]);
    for (size_t i = 0; i < rows; ++i) std::swap(m[i][t], m[i][pj]);
    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (size_t i = t + 1; i < rows; ++i) {
        if (m[i][t] == 0) continue;
        long long f = m[i][t] / m[t][t];
        for (size_t j = t; j < cols; ++j) m[i][j] -= f * m[t][j];
        if (m[i][t] != 0) {  // remainder survives: it is strictly smaller
          std::swap(m[t], m[i]);
          dirty = true;
        }
      }
      for (size_t j = t + 1; j < cols; ++j) {
        if (m[t][j] == 0) continue;
        long long f = m[t][j] / m[t][t];
        for (size_t i = t; i < rows; ++i) m[i][j] -= f * m[i][t];
        if (m[t][j] != 0) {
          for (size_t i = 0; i < rows; ++i) std::swap(m[i][t], m[i][j]);
          dirty = true;
        }
      }
    }
    diag.push_back(std::llabs(m[t][t]));
  }
  diag.resize(rank, 0);  // rank-deficient blocks contribute zero entries
  // Enforce divisibility d1 | d2 | ...
  for (size_t i = 0; i + 1 < diag.size(); ++i)
    for (size_t j = i + 1; j < diag.size(); ++j) {
      if (diag[i] == 0) std::swap(diag[i], diag[j]);
      if (diag[j] % std::max(diag[i], 1LL) != 0) {
        long long g = std::gcd(diag[i], diag[j]);
        long long l = diag[i] / std::max(g, 1LL) * diag[j];
        diag[i] = g;
        diag[j] = l;
      }
    }
  return diag;
}

std::vector<long long> abelianization(const Signature& s) {
  std::vector<std::vector<long long>> rel = {{s.p, 0}, {0, s.q}, {s.r, s.r}};
  auto d = smith_diagonal(rel);
  std::vector<long long> out;
  for (long long v : d)
    if (v != 1 && v != 0) out.push_back(v);
  // Rank 2 relation lattice of full rank: no free part expected for
  // hyperbolic triples (determinant checks guarantee finite abelianization).
  return out;
}

}  // namespace dessins
