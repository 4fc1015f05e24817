#pragma once

#include <cstdint>
#include <utility>

#include <gmpxx.h>

namespace dessins {

// Number of prime divisors of v counted with multiplicity.
uint32_t big_omega(uint64_t v);

// Exact sum over nu <= n of nu^(6*(big_omega(nu)+1)); an upper bound for the
// number of normal subgroups of index <= n in a 2-generator group.
mpz_class lubotzky_bound(uint64_t n);

// (e^{(ln g)^2}, e^{2 (ln g)^2}): the conjectured two-sided envelope for the
// number of quasiplatonic surfaces of genus g (natural logarithm).
std::pair<long double, long double> envelope(int g);

// ln(count) / (ln g)^2: the empirical exponent placing a count between the
// envelopes.
long double exponent_estimate(uint64_t count, int g);

// Compares an exact integer count against e^{c (ln g)^2} via logarithms.
// Returns -1, 0, or +1.
int compare_count_to_envelope(const mpz_class& count, int g, double c);

}  // namespace dessins
