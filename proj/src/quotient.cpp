#include "dessins/quotient.hpp"

#include <openssl/sha.h>

#include <cstring>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace dessins {

namespace {

// Cycle length of the map `step` through start; the action partitions cosets
// into cycles, and uniformity of the cycle lengths is verified by the caller.
template <typename Step>
uint32_t cycle_length(uint32_t start, Step step) {
  uint32_t len = 0, c = start;
  do {
    c = step(c);
    ++len;
  } while (c != start);
  return len;
}

struct VecHash {
  size_t operator()(const std::vector<uint32_t>& v) const {
    size_t h = 1469598103934665603ull;
    for (uint32_t x : v) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace

std::array<uint32_t, 3> table_generator_orders(const CosetTable& t) {
  if (!t.complete()) throw std::invalid_argument("table is not complete");
  uint32_t n = t.size();
  auto step0 = [&](uint32_t c) { return t.get(kG0, c); };
  auto step1 = [&](uint32_t c) { return t.get(kG1, c); };
  auto step01 = [&](uint32_t c) { return t.get(kG1, t.get(kG0, c)); };
  std::array<uint32_t, 3> orders{cycle_length(1, step0), cycle_length(1, step1),
                                 cycle_length(1, step01)};
  for (uint32_t c = 2; c <= n; ++c) {
    if (cycle_length(c, step0) != orders[0] || cycle_length(c, step1) != orders[1] ||
        cycle_length(c, step01) != orders[2])
      throw std::invalid_argument("table action is not uniform (not regular)");
  }
  return orders;
}

bool is_torsion_free(const Signature& sig, const std::array<uint32_t, 3>& orders) {
  return orders[0] == (uint32_t)sig.p && orders[1] == (uint32_t)sig.q &&
         orders[2] == (uint32_t)sig.r;
}

uint64_t permutation_group_order(const CosetTable& t, uint64_t cap) {
  if (!t.complete()) throw std::invalid_argument("table is not complete");
  uint32_t n = t.size();
  std::vector<uint32_t> identity(n);
  for (uint32_t i = 0; i < n; ++i) identity[i] = i + 1;
  std::unordered_map<std::vector<uint32_t>, uint32_t, VecHash> seen;
  std::vector<std::vector<uint32_t>> queue;
  seen.emplace(identity, 0);
  queue.push_back(identity);
  for (size_t head = 0; head < queue.size(); ++head) {
    std::vector<uint32_t> cur = queue[head];
    for (int g = 0; g < 2; ++g) {
      std::vector<uint32_t> next(n);
      for (uint32_t i = 0; i < n; ++i) next[i] = t.get(g, cur[i]);
      if (seen.emplace(next, 0).second) {
        if (seen.size() > cap) return cap + 1;
        queue.push_back(std::move(next));
      }
    }
  }
  return seen.size();
}

Digest canonical_key(const Signature& sig, const CosetTable& t) {
  std::vector<uint8_t> bytes;
  auto put32 = [&bytes](uint32_t v) {
    bytes.push_back(v & 0xff);
    bytes.push_back((v >> 8) & 0xff);
    bytes.push_back((v >> 16) & 0xff);
    bytes.push_back((v >> 24) & 0xff);
  };
  put32(sig.p);
  put32(sig.q);
  put32(sig.r);
  std::vector<uint8_t> table_bytes = t.serialize();
  bytes.insert(bytes.end(), table_bytes.begin(), table_bytes.end());
  Digest d{};
  SHA256(bytes.data(), bytes.size(), d.data());
  return d;
}

std::string digest_hex(const Digest& d) {
  static const char* hex = "0123456789abcdef";
  std::string s;
  s.reserve(64);
  for (uint8_t b : d) {
    s.push_back(hex[b >> 4]);
    s.push_back(hex[b & 0xf]);
  }
  return s;
}

std::optional<Digest> digest_from_hex(const std::string& s) {
  if (s.size() != 64) return std::nullopt;
  Digest d{};
  for (size_t i = 0; i < 32; ++i) {
    auto nib = [](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      if (c >= 'A' && c <= 'F') return c - 'A' + 10;
      return -1;
    };
    int hi = nib(s[2 * i]), lo = nib(s[2 * i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    d[i] = (uint8_t)((hi << 4) | lo);
  }
  return d;
}

QuotientInfo analyze_quotient(const Signature& sig, const CosetTable& t) {
  QuotientInfo info;
  info.n = t.size();
  info.orders = table_generator_orders(t);
  info.torsion_free = is_torsion_free(sig, info.orders);
  if (info.torsion_free) {
    if (auto g = genus_of_index(sig, info.n)) info.genus = *g;
  }
  info.canonical_key = canonical_key(sig, t);
  return info;
}

}  // namespace dessins
