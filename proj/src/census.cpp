#include "dessins/census.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "dessins/bounds.hpp"
#include "dessins/singerman.hpp"

namespace dessins {

namespace {

using json = nlohmann::ordered_json;

const char* kB64 = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string b64_encode(const std::vector<uint8_t>& in) {
  std::string out;
  out.reserve((in.size() + 2) / 3 * 4);
  for (size_t i = 0; i < in.size(); i += 3) {
    uint32_t v = in[i] << 16;
    if (i + 1 < in.size()) v |= in[i + 1] << 8;
    if (i + 2 < in.size()) v |= in[i + 2];
    out.push_back(kB64[(v >> 18) & 63]);
    out.push_back(kB64[(v >> 12) & 63]);
    out.push_back(i + 1 < in.size() ? kB64[(v >> 6) & 63] : '=');
    out.push_back(i + 2 < in.size() ? kB64[v & 63] : '=');
  }
  return out;
}

std::vector<uint8_t> b64_decode(const std::string& in) {
  auto val = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  std::vector<uint8_t> out;
  uint32_t v = 0;
  int bits = 0;
  for (char c : in) {
    if (c == '=') break;
    int d = val(c);
    if (d < 0) throw std::invalid_argument("bad base64");
    v = (v << 6) | d;
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back((v >> bits) & 0xff);
    }
  }
  return out;
}

json record_json(const CensusRecord& r) {
  json j;
  j["sig"] = r.sig.str();
  j["n"] = r.n;
  j["genus"] = r.genus;
  j["orders"] = {r.orders[0], r.orders[1], r.orders[2]};
  j["key"] = digest_hex(r.key);
  j["table"] = b64_encode(r.table.serialize());
  return j;
}

json diag_json(const DiagRecord& r) {
  json j;
  j["sig"] = r.sig.str();
  j["n"] = r.n;
  j["orders"] = {r.orders[0], r.orders[1], r.orders[2]};
  j["torsion_free"] = r.torsion_free;
  j["whole_group"] = r.whole_group;
  j["key"] = digest_hex(r.key);
  return j;
}

struct UnionFind {
  std::unordered_map<std::string, std::string> parent;
  const std::string& find(const std::string& x) {
    auto it = parent.find(x);
    if (it == parent.end()) {
      parent.emplace(x, x);
      return parent.find(x)->first;
    }
    if (it->second == x) return it->first;
    std::string root = find(it->second);
    it->second = root;
    return parent.find(it->second)->first;
  }
  void unite(const std::string& a, const std::string& b) {
    std::string ra = find(a), rb = find(b);
    if (ra != rb) parent[ra] = rb;
  }
};

}  // namespace

std::string WorkUnit::id() const { return sig.str() + ":" + std::to_string(n); }

CensusStore::CensusStore(std::string root, int g_max) : root_(std::move(root)), g_max_(g_max) {
  dir_ = root_ + "/census/" + std::to_string(g_max_);
}

void CensusStore::load() {
  records_.clear();
  diags_.clear();
  unit_state_.clear();
  run_log_.clear();
  std::ifstream rf(dir_ + "/records.jsonl");
  std::string line;
  while (std::getline(rf, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    CensusRecord r;
    r.sig = Signature::parse(j["sig"].get<std::string>()).value();
    r.n = j["n"].get<uint32_t>();
    r.genus = j["genus"].get<int>();
    for (int i = 0; i < 3; ++i) r.orders[i] = j["orders"][i].get<uint32_t>();
    r.key = digest_from_hex(j["key"].get<std::string>()).value();
    r.table = CosetTable::deserialize(b64_decode(j["table"].get<std::string>())).value();
    records_.push_back(std::move(r));
  }
  std::ifstream df(dir_ + "/diagnostics.jsonl");
  while (std::getline(df, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    DiagRecord r;
    r.sig = Signature::parse(j["sig"].get<std::string>()).value();
    r.n = j["n"].get<uint32_t>();
    for (int i = 0; i < 3; ++i) r.orders[i] = j["orders"][i].get<uint32_t>();
    r.torsion_free = j["torsion_free"].get<bool>();
    r.whole_group = j["whole_group"].get<bool>();
    r.key = digest_from_hex(j["key"].get<std::string>()).value();
    diags_.push_back(std::move(r));
  }
  std::ifstream mf(dir_ + "/manifest.json");
  if (mf) {
    json m = json::parse(mf);
    for (auto& [k, v] : m["units"].items()) unit_state_[k] = v.get<std::string>();
    if (m.contains("runs"))
      for (auto& r : m["runs"]) run_log_.push_back(r.get<std::string>());
  }
}

void CensusStore::save() const {
  std::filesystem::create_directories(dir_);
  std::vector<const CensusRecord*> recs;
  for (const auto& r : records_) recs.push_back(&r);
  std::sort(recs.begin(), recs.end(), [](const CensusRecord* a, const CensusRecord* b) {
    if (a->genus != b->genus) return a->genus < b->genus;
    if (a->sig != b->sig) return a->sig < b->sig;
    if (a->n != b->n) return a->n < b->n;
    return a->key < b->key;
  });
  std::ofstream rf(dir_ + "/records.jsonl", std::ios::trunc);
  for (const CensusRecord* r : recs) rf << record_json(*r).dump() << "\n";
  std::vector<const DiagRecord*> ds;
  for (const auto& d : diags_) ds.push_back(&d);
  std::sort(ds.begin(), ds.end(), [](const DiagRecord* a, const DiagRecord* b) {
    if (a->sig != b->sig) return a->sig < b->sig;
    if (a->n != b->n) return a->n < b->n;
    return a->key < b->key;
  });
  std::ofstream df(dir_ + "/diagnostics.jsonl", std::ios::trunc);
  for (const DiagRecord* d : ds) df << diag_json(*d).dump() << "\n";
  json m;
  m["version"] = 1;
  m["g_max"] = g_max_;
  json units = json::object();
  for (const auto& [k, v] : unit_state_) units[k] = v;
  m["units"] = std::move(units);
  m["runs"] = run_log_;
  std::ofstream mf(dir_ + "/manifest.json", std::ios::trunc);
  mf << m.dump(2) << "\n";
}

bool CensusStore::unit_done(const std::string& unit_id) const {
  auto it = unit_state_.find(unit_id);
  return it != unit_state_.end() && it->second == "done";
}

void CensusStore::mark_done(const std::string& unit_id, uint64_t n_records,
                            const std::string& note) {
  unit_state_[unit_id] = "done";
  run_log_.push_back(unit_id + " done records=" + std::to_string(n_records) +
                     (note.empty() ? "" : " " + note));
}

void CensusStore::mark_failed(const std::string& unit_id, const std::string& error) {
  if (unit_state_[unit_id] == "done") return;
  unit_state_[unit_id] = "failed: " + error;
  run_log_.push_back(unit_id + " failed: " + error);
}

std::vector<std::string> CensusStore::failed_units() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : unit_state_)
    if (v != "done") out.push_back(k + " (" + v + ")");
  return out;
}

void CensusStore::add_record(CensusRecord rec) {
  for (const auto& r : records_)
    if (r.key == rec.key && r.sig == rec.sig) return;
  records_.push_back(std::move(rec));
}

void CensusStore::add_diag(DiagRecord rec) {
  for (const auto& r : diags_)
    if (r.key == rec.key && r.sig == rec.sig) return;
  diags_.push_back(std::move(rec));
}

std::vector<WorkUnit> CensusStore::units() const {
  std::vector<WorkUnit> out;
  for (const auto& adm : admissible_signatures(g_max_))
    for (const auto& gi : adm.pairs)
      out.push_back(WorkUnit{adm.sig, gi.genus, (uint32_t)gi.index});
  return out;
}

std::vector<std::string> CensusStore::missing_units(int g) const {
  std::vector<std::string> out;
  for (const auto& u : units())
    if (u.genus <= g && !unit_done(u.id())) out.push_back(u.id());
  return out;
}

namespace {

CensusRunResult run_units(CensusStore& store, std::vector<WorkUnit> todo, int workers,
                          uint64_t node_budget, double seconds_budget, bool diagnostics) {
  CensusRunResult res;
  res.units_total = todo.size();
  std::vector<WorkUnit> pending;
  for (const auto& u : todo) {
    std::string id = diagnostics ? "diag:" + u.id() : u.id();
    if (store.unit_done(id)) ++res.units_done;
    else pending.push_back(u);
  }
  std::mutex mu;
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= pending.size()) return;
      const WorkUnit& u = pending[i];
      std::string id = diagnostics ? "diag:" + u.id() : u.id();
      SearchConfig cfg;
      cfg.n_max = u.n;
      cfg.mode = diagnostics ? SearchMode::kAll : SearchMode::kTorsionFreeOnly;
      cfg.node_budget = node_budget;
      cfg.seconds_budget = seconds_budget;
      std::vector<CensusRecord> recs;
      std::vector<DiagRecord> diags;
      try {
        enumerate_normal(u.sig, cfg, [&](const RegularTable& t) {
          if (diagnostics) {
            DiagRecord d;
            d.sig = u.sig;
            d.n = t.table.size();
            d.orders = t.orders;
            d.torsion_free = t.torsion_free;
            d.whole_group = t.whole_group;
            d.key = canonical_key(u.sig, t.table);
            diags.push_back(std::move(d));
          } else if (t.torsion_free && t.table.size() == u.n) {
            CensusRecord r;
            r.sig = u.sig;
            r.n = u.n;
            r.genus = u.genus;
            r.orders = t.orders;
            r.key = canonical_key(u.sig, t.table);
            r.table = t.table;
            recs.push_back(std::move(r));
          }
          return true;
        });
      } catch (const SearchBudgetExceeded&) {
        std::lock_guard<std::mutex> lk(mu);
        store.mark_failed(id, "budget exceeded");
        res.failed.push_back(id);
        continue;
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lk(mu);
        store.mark_failed(id, e.what());
        res.failed.push_back(id);
        continue;
      }
      std::lock_guard<std::mutex> lk(mu);
      for (auto& r : recs) store.add_record(std::move(r));
      for (auto& d : diags) store.add_diag(std::move(d));
      store.mark_done(id, diagnostics ? diags.size() : recs.size(),
                      diagnostics ? "all-mode" : "");
      ++res.units_done;
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < std::max(1, workers); ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  store.save();
  return res;
}

}  // namespace

CensusRunResult run_census(CensusStore& store, int workers, uint64_t node_budget,
                           double seconds_budget) {
  return run_units(store, store.units(), workers, node_budget, seconds_budget, false);
}

CensusRunResult run_diagnostics(CensusStore& store, uint32_t n_max, int workers,
                                uint64_t node_budget, double seconds_budget) {
  std::vector<WorkUnit> todo;
  for (const auto& adm : admissible_signatures(store.g_max()))
    todo.push_back(WorkUnit{adm.sig, 0, n_max});
  return run_units(store, std::move(todo), workers, node_budget, seconds_budget, true);
}

std::vector<SurfaceClass> dedupe(const CensusStore& store, int g) {
  auto missing = store.missing_units(g);
  if (!missing.empty()) throw IncompleteStore(std::move(missing));
  std::unordered_map<std::string, const CensusRecord*> by_key;
  std::vector<const CensusRecord*> in_scope;
  for (const auto& r : store.records())
    if (r.genus <= g) {
      by_key.emplace(digest_hex(r.key), &r);
      in_scope.push_back(&r);
    }
  UnionFind uf;
  for (const CensusRecord* r : in_scope) {
    std::string key = digest_hex(r->key);
    uf.find(key);
    // Rearrangements of the generating pair: the normalizer action on
    // kernels within the same triangle group.
    for (const CosetTable& v : sigma_variants(r->table)) {
      std::string vkey = digest_hex(canonical_key(r->sig, v));
      if (!by_key.count(vkey))
        throw std::runtime_error("store inconsistent: rearranged kernel missing for " + key);
      uf.unite(key, vkey);
    }
    // Extensions into larger triangle groups.
    for (const RuleInstance& inst : instances_for(r->sig)) {
      auto ext = try_extend(r->sig, r->table, inst);
      if (!ext) continue;
      std::string ekey = digest_hex(canonical_key(ext->sup_sig, ext->table));
      if (!by_key.count(ekey))
        throw std::runtime_error("store inconsistent: extension record missing for " + key);
      uf.unite(key, ekey);
    }
  }
  std::map<std::string, std::vector<const CensusRecord*>> classes;
  for (const CensusRecord* r : in_scope) classes[uf.find(digest_hex(r->key))].push_back(r);
  std::vector<SurfaceClass> out;
  for (auto& [root, members] : classes) {
    SurfaceClass c;
    c.genus = members[0]->genus;
    const CensusRecord* rep = members[0];
    for (const CensusRecord* m : members) {
      if (m->n > rep->n || (m->n == rep->n && m->key < rep->key)) rep = m;
      c.member_keys.push_back(digest_hex(m->key));
    }
    std::sort(c.member_keys.begin(), c.member_keys.end());
    c.representative_key = digest_hex(rep->key);
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const SurfaceClass& a, const SurfaceClass& b) {
    if (a.genus != b.genus) return a.genus < b.genus;
    return a.representative_key < b.representative_key;
  });
  return out;
}

CountsReport counts(const CensusStore& store, int g) {
  auto missing = store.missing_units(g);
  if (!missing.empty()) throw IncompleteStore(std::move(missing));
  CountsReport rep;
  rep.g = g;
  for (int gamma = 2; gamma <= g; ++gamma) rep.r_of_genus[gamma] = 0;
  for (const auto& r : store.records()) {
    if (r.genus > g) continue;
    ++rep.r_of_genus[r.genus];
    ++rep.r_split[{r.genus, r.sig.str()}];
    ++rep.s;
  }
  rep.q = dedupe(store, g).size();
  auto [lo, up] = envelope(g);
  rep.lower = lo;
  rep.upper = up;
  rep.exponent = rep.s >= 1 ? exponent_estimate(rep.s, g) : 0;
  return rep;
}

std::string CountsReport::human() const {
  std::ostringstream os;
  char buf[256];
  os << "genus  R(genus)\n";
  for (const auto& [gamma, rv] : r_of_genus) {
    snprintf(buf, sizeof buf, "%5d  %8llu\n", gamma, (unsigned long long)rv);
    os << buf;
  }
  os << "per-signature breakdown:\n";
  for (const auto& [k, v] : r_split) {
    snprintf(buf, sizeof buf, "  genus %d  (%s)  %llu\n", k.first, k.second.c_str(),
             (unsigned long long)v);
    os << buf;
  }
  snprintf(buf, sizeof buf, "S(%d)=%llu Q(%d)=%llu\n", g, (unsigned long long)s, g,
           (unsigned long long)q);
  os << buf;
  snprintf(buf, sizeof buf, "envelope lower=%.12Lg upper=%.12Lg exponent=%.12Lg\n", lower, upper,
           exponent);
  os << buf;
  return os.str();
}

std::string CountsReport::csv() const {
  std::ostringstream os;
  os << "g,R,S,Q,lower,upper,exponent\n";
  char buf[256];
  uint64_t cum = 0;
  for (const auto& [gamma, rv] : r_of_genus) {
    cum += rv;
    if (gamma == g) {
      snprintf(buf, sizeof buf, "%d,%llu,%llu,%llu,%.12Lg,%.12Lg,%.12Lg\n", gamma,
               (unsigned long long)rv, (unsigned long long)cum, (unsigned long long)q, lower,
               upper, exponent);
    } else {
      snprintf(buf, sizeof buf, "%d,%llu,%llu,,,,\n", gamma, (unsigned long long)rv,
               (unsigned long long)cum);
    }
    os << buf;
  }
  return os.str();
}

std::string export_dessins(const CensusStore& store, std::optional<int> genus_filter) {
  std::ostringstream os;
  std::vector<const CensusRecord*> recs;
  for (const auto& r : store.records())
    if (!genus_filter || r.genus == *genus_filter) recs.push_back(&r);
  std::sort(recs.begin(), recs.end(), [](const CensusRecord* a, const CensusRecord* b) {
    if (a->genus != b->genus) return a->genus < b->genus;
    if (a->sig != b->sig) return a->sig < b->sig;
    return a->key < b->key;
  });
  for (const CensusRecord* r : recs) {
    json j;
    j["sig"] = r->sig.str();
    j["genus"] = r->genus;
    j["n"] = r->n;
    j["aut_order"] = r->n;
    std::vector<uint32_t> g0, g1;
    for (uint32_t c = 1; c <= r->n; ++c) {
      g0.push_back(r->table.get(0, c));
      g1.push_back(r->table.get(1, c));
    }
    j["g0"] = g0;
    j["g1"] = g1;
    j["key"] = digest_hex(r->key);
    os << j.dump() << "\n";
  }
  return os.str();
}

}  // namespace dessins
