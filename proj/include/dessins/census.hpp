#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dessins/normal_search.hpp"
#include "dessins/quotient.hpp"
#include "dessins/signature.hpp"

namespace dessins {

// One stored torsion-free kernel.
struct CensusRecord {
  Signature sig;
  uint32_t n = 0;
  int genus = 0;
  std::array<uint32_t, 3> orders{};
  Digest key{};
  CosetTable table;
};

// One all-mode diagnostics row (small-index normal subgroups, any torsion).
struct DiagRecord {
  Signature sig;
  uint32_t n = 0;
  std::array<uint32_t, 3> orders{};
  bool torsion_free = false;
  bool whole_group = false;
  Digest key{};
};

// A resumable enumeration unit: one admissible (signature, index) pair.
struct WorkUnit {
  Signature sig;
  int genus = 0;
  uint32_t n = 0;
  std::string id() const;  // "p,q,r:n"
};

struct IncompleteStore : std::runtime_error {
  std::vector<std::string> missing;
  explicit IncompleteStore(std::vector<std::string> m)
      : std::runtime_error("census store incomplete"), missing(std::move(m)) {}
};

// Directory layout: <root>/census/<gmax>/{records.jsonl,manifest.json,
// diagnostics.jsonl}.  Records are canonical JSON lines without timestamps;
// the files are rewritten sorted and duplicate-free on save, so complete
// stores are byte-identical across runs.  Run provenance lives in the
// manifest only.
class CensusStore {
 public:
  CensusStore(std::string root, int g_max);

  const std::string& dir() const { return dir_; }
  int g_max() const { return g_max_; }

  void load();  // reads existing files; missing files mean an empty store
  void save() const;

  bool unit_done(const std::string& unit_id) const;
  void mark_done(const std::string& unit_id, uint64_t n_records, const std::string& note);
  void mark_failed(const std::string& unit_id, const std::string& error);
  std::vector<std::string> failed_units() const;

  void add_record(CensusRecord rec);  // idempotent by key
  void add_diag(DiagRecord rec);
  const std::vector<CensusRecord>& records() const { return records_; }
  const std::vector<DiagRecord>& diagnostics() const { return diags_; }

  // Units for every admissible (signature, genus<=g) pair, sorted.
  std::vector<WorkUnit> units() const;
  std::vector<std::string> missing_units(int g) const;

 private:
  std::string root_, dir_;
  int g_max_;
  std::vector<CensusRecord> records_;
  std::vector<DiagRecord> diags_;
  std::map<std::string, std::string> unit_state_;  // id -> "done" | error text
  std::vector<std::string> run_log_;               // provenance, manifest only
};

struct CensusRunResult {
  size_t units_total = 0;
  size_t units_done = 0;
  std::vector<std::string> failed;  // unit ids that hit budgets or errors
};

// Runs all incomplete units with a worker pool; torsion-free kernels at the
// unit's exact index are stored.  Budget trips mark the unit failed and keep
// the store consistent.  Re-running completed units is a no-op.
CensusRunResult run_census(CensusStore& store, int workers, uint64_t node_budget = 0,
                           double seconds_budget = 0);

// All-mode enumeration at index <= n_max for every admissible signature,
// stored in the diagnostics log (separate unit ids "diag:<sig>:<n>").
CensusRunResult run_diagnostics(CensusStore& store, uint32_t n_max, int workers,
                                uint64_t node_budget = 0, double seconds_budget = 0);

struct CountsReport {
  int g = 0;
  std::map<int, uint64_t> r_of_genus;                       // R(genus)
  std::map<std::pair<int, std::string>, uint64_t> r_split;  // (genus, sig) -> count
  uint64_t s = 0;                                           // S(g)
  uint64_t q = 0;                                           // Q(g)
  long double lower = 0, upper = 0, exponent = 0;

  std::string human() const;
  std::string csv() const;
};

// Exact counts over a store complete up to genus g; throws IncompleteStore.
CountsReport counts(const CensusStore& store, int g);

struct SurfaceClass {
  int genus = 0;
  std::string representative_key;       // hex key of a maximal member
  std::vector<std::string> member_keys;  // hex keys of all member records
};

// Partitions genus <= g records into Riemann-surface classes: records are
// merged when one is a generating-pair rearrangement of the other (the
// normalizer action on kernels) or when an inclusion-rule extension of one
// equals the other.  Q(g) is the class count.
std::vector<SurfaceClass> dedupe(const CensusStore& store, int g);

// Monodromy export: one JSON line per record with the two dart permutations.
std::string export_dessins(const CensusStore& store, std::optional<int> genus_filter);

}  // namespace dessins
