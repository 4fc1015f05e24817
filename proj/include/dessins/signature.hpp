#pragma once

#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace dessins {

using Rat = boost::rational<long long>;

// Unordered hyperbolic triple (p,q,r), stored sorted p <= q <= r.
// mu = 1 - 1/p - 1/q - 1/r > 0, and mu >= 1/42 with equality at (2,3,7).
struct Signature {
  int p = 0, q = 0, r = 0;
  Rat mu;

  static std::optional<Signature> make(int p, int q, int r);

  bool operator==(const Signature& o) const { return p == o.p && q == o.q && r == o.r; }
  bool operator!=(const Signature& o) const { return !(*this == o); }
  bool operator<(const Signature& o) const;

  std::string str() const;  // "p,q,r"
  static std::optional<Signature> parse(const std::string& s);
};

// 1 - 1/p - 1/q - 1/r for any positive triple; <= 0 means not hyperbolic.
Rat deficiency_raw(int p, int q, int r);

// Index of a genus-g surface kernel: n = (2g-2)/mu, when integral and n >= 2.
std::optional<long long> index_of_genus(const Signature& s, int genus);
// Genus from index: g = 1 + n*mu/2, when integral and >= 2.
std::optional<int> genus_of_index(const Signature& s, long long n);

struct GenusIndex {
  int genus;
  long long index;
};

struct AdmissibleSignature {
  Signature sig;
  std::vector<GenusIndex> pairs;  // sorted by genus
};

// All signatures with r <= 84*g_max admitting some genus in [2, g_max]:
// n = (2g-2)/mu integral with p|n, q|n, r|n (necessary for a torsion-free
// kernel: generator images have full orders p, q, r dividing the quotient
// order). Sorted by signature.
std::vector<AdmissibleSignature> admissible_signatures(int g_max);

// Elementary divisors > 1 of the abelianized group, via Smith normal form
// of the relation matrix rows (p,0), (0,q), (r,r) over Z^2.
std::vector<long long> abelianization(const Signature& s);

// Smith normal form diagonal (non-negative, each dividing the next) of an
// integer matrix given as rows.
std::vector<long long> smith_diagonal(std::vector<std::vector<long long>> m);

}  // namespace dessins
