#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dessins/coset_table.hpp"
#include "dessins/signature.hpp"

namespace dessins {

enum class SearchMode { kAll, kTorsionFreeOnly };

struct SearchConfig {
  uint32_t n_max = 1;
  SearchMode mode = SearchMode::kTorsionFreeOnly;
  // Uniform-cycle prune: all closed cycles of a relator word must share one
  // length dividing the exponent (exactly the exponent in torsion-free mode).
  bool prune_uniform_cycle = true;
  // Left-coherence prune: partial left-translation maps seeded at coset 1
  // must stay single-valued and injective under propagation.
  bool prune_left_coherence = true;
  uint64_t node_budget = 0;       // 0 = unlimited
  double seconds_budget = 0;      // 0 = unlimited
};

struct SearchStats {
  uint64_t nodes = 0;
  uint64_t solutions = 0;
  uint64_t deductions = 0;
  uint64_t prune_table_conflict = 0;
  uint64_t prune_cycle = 0;
  uint64_t prune_left_coherence = 0;
  uint64_t discarded_nonregular = 0;
  uint32_t max_depth = 0;
};

// A complete table that passed the regularity verification: the coset action
// of the quotient on itself.
struct RegularTable {
  Signature sig;
  CosetTable table;
  std::array<uint32_t, 3> orders{};  // orders of the two generator images and their product
  bool torsion_free = false;
  bool whole_group = false;  // the flagged index-1 table
};

// Serialized DFS position: the branch decisions along the current path.
struct SearchCheckpoint {
  Signature sig;
  SearchConfig config;
  std::vector<std::pair<uint32_t, uint32_t>> path;  // (slot, chosen target)

  std::vector<uint8_t> serialize() const;
  static std::optional<SearchCheckpoint> deserialize(const std::vector<uint8_t>& bytes);
};

struct SearchBudgetExceeded : std::runtime_error {
  SearchCheckpoint checkpoint;
  SearchStats stats;
  SearchBudgetExceeded(SearchCheckpoint c, SearchStats s)
      : std::runtime_error("normal search budget exceeded"), checkpoint(std::move(c)), stats(s) {}
};

// Depth-first enumeration of canonically numbered regular (normal-subgroup)
// coset tables of index <= n_max.  Emits each table once, in a deterministic
// order; the index-1 table is included (flagged) in all mode.  The callback
// may return false to stop early.  Throws SearchBudgetExceeded carrying a
// resumable checkpoint when a budget trips.
void enumerate_normal(const Signature& sig, const SearchConfig& config,
                      const std::function<bool(const RegularTable&)>& emit,
                      SearchStats* stats = nullptr,
                      const SearchCheckpoint* resume = nullptr);

// Convenience wrapper collecting all results.
std::vector<RegularTable> enumerate_normal_all(const Signature& sig, const SearchConfig& config,
                                               SearchStats* stats = nullptr);

}  // namespace dessins
