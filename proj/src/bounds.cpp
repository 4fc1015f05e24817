#include "dessins/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace dessins {

uint32_t big_omega(uint64_t v) {
  if (v == 0) throw std::invalid_argument("big_omega(0)");
  uint32_t k = 0;
  for (uint64_t d = 2; d * d <= v; ++d)
    while (v % d == 0) {
      v /= d;
      ++k;
    }
  if (v > 1) ++k;
  return k;
}

mpz_class lubotzky_bound(uint64_t n) {
  if (n == 0) throw std::invalid_argument("lubotzky_bound(0)");
  mpz_class sum = 0;
  for (uint64_t nu = 1; nu <= n; ++nu) {
    mpz_class term;
    mpz_ui_pow_ui(term.get_mpz_t(), nu, 6ull * (big_omega(nu) + 1));
    sum += term;
  }
  return sum;
}

std::pair<long double, long double> envelope(int g) {
  if (g < 2) throw std::invalid_argument("envelope: genus must be >= 2");
  long double l = std::log((long double)g);
  return {std::exp(l * l), std::exp(2 * l * l)};
}

long double exponent_estimate(uint64_t count, int g) {
  if (count < 1 || g < 2) throw std::invalid_argument("exponent_estimate: bad arguments");
  long double l = std::log((long double)g);
  return std::log((long double)count) / (l * l);
}

int compare_count_to_envelope(const mpz_class& count, int g, double c) {
  if (count <= 0 || g < 2) throw std::invalid_argument("compare_count_to_envelope: bad arguments");
  // ln(count) via mpz: count = m * 2^e with m in [0.5, 1).
  signed long e = 0;
  double m = mpz_get_d_2exp(&e, count.get_mpz_t());
  long double ln_count = std::log((long double)m) + (long double)e * std::log(2.0L);
  long double l = std::log((long double)g);
  long double target = (long double)c * l * l;
  if (ln_count < target) return -1;
  if (ln_count > target) return 1;
  return 0;
}

}  // namespace dessins
