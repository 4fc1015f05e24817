#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "dessins/coset_table.hpp"
#include "dessins/signature.hpp"

namespace dessins {

using Digest = std::array<uint8_t, 32>;

struct QuotientInfo {
  uint32_t n = 0;
  std::array<uint32_t, 3> orders{};  // orders of the images of g0, g1, g0*g1
  bool torsion_free = false;
  std::optional<long long> genus;  // defined only for torsion-free kernels
  Digest canonical_key{};
};

// Cycle lengths of g0, g1, g0*g1 through coset 1 of a complete table; checks
// that all cycles of each word have equal length (true for any regular action).
std::array<uint32_t, 3> table_generator_orders(const CosetTable& t);

bool is_torsion_free(const Signature& sig, const std::array<uint32_t, 3>& orders);

// Order of the permutation group generated by the two columns, computed by
// closure BFS; returns cap + 1 as soon as the closure exceeds cap.
uint64_t permutation_group_order(const CosetTable& t, uint64_t cap);

// SHA-256 over (p, q, r as LE32) followed by the canonical table bytes.
Digest canonical_key(const Signature& sig, const CosetTable& t);

std::string digest_hex(const Digest& d);
std::optional<Digest> digest_from_hex(const std::string& s);

QuotientInfo analyze_quotient(const Signature& sig, const CosetTable& t);

}  // namespace dessins
