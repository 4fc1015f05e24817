#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dessins/bounds.hpp"
#include "dessins/census.hpp"
#include "dessins/normal_search.hpp"
#include "dessins/quotient.hpp"
#include "dessins/signature.hpp"
#include "dessins/singerman.hpp"

using namespace dessins;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;
constexpr int kExitIncomplete = 4;

struct Common {
  std::string store;
  int workers = 1;
  uint64_t budget_nodes = 0;
  double budget_seconds = 0;
  std::string format = "human";
  std::string config_path;
  // which fields were set by flags
  std::set<std::string> from_flags;
};

// Precedence: flags > config file > DESSINS_STORE env > defaults.
void resolve_config(Common& c) {
  nlohmann::json cfg;
  if (!c.config_path.empty()) {
    std::ifstream f(c.config_path);
    if (!f) {
      std::cerr << "cannot read config file " << c.config_path << "\n";
      exit(kExitUsage);
    }
    f >> cfg;
  }
  auto want = [&](const char* key) { return !c.from_flags.count(key) && cfg.contains(key); };
  if (want("store")) c.store = cfg["store"].get<std::string>();
  if (want("workers")) c.workers = cfg["workers"].get<int>();
  if (want("budget_nodes")) c.budget_nodes = cfg["budget_nodes"].get<uint64_t>();
  if (want("budget_seconds")) c.budget_seconds = cfg["budget_seconds"].get<double>();
  if (want("format")) c.format = cfg["format"].get<std::string>();
  if (c.store.empty() && !c.from_flags.count("store")) {
    if (const char* env = std::getenv("DESSINS_STORE")) c.store = env;
  }
  if (c.store.empty()) c.store = "store";
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--store", c.store, "census store directory")
      ->each([&c](const std::string&) { c.from_flags.insert("store"); });
  app->add_option("--workers", c.workers, "worker threads")
      ->each([&c](const std::string&) { c.from_flags.insert("workers"); });
  app->add_option("--budget-nodes", c.budget_nodes, "search node budget per unit")
      ->each([&c](const std::string&) { c.from_flags.insert("budget_nodes"); });
  app->add_option("--budget-seconds", c.budget_seconds, "wall-clock budget per unit")
      ->each([&c](const std::string&) { c.from_flags.insert("budget_seconds"); });
  app->add_option("--format", c.format, "human|csv|jsonl")
      ->each([&c](const std::string&) { c.from_flags.insert("format"); });
  app->add_option("--config", c.config_path, "JSON config file");
}

Signature parse_sig_or_die(const std::string& s) {
  auto sig = Signature::parse(s);
  if (!sig) {
    std::cerr << "non-hyperbolic or malformed signature: " << s << "\n";
    exit(kExitUsage);
  }
  return *sig;
}

int cmd_signatures(int g_max, const Common& c) {
  auto adm = admissible_signatures(g_max);
  if (c.format == "csv") {
    std::cout << "p,q,r,genus,index\n";
    for (const auto& a : adm)
      for (const auto& gi : a.pairs)
        std::cout << a.sig.p << "," << a.sig.q << "," << a.sig.r << "," << gi.genus << ","
                  << gi.index << "\n";
  } else {
    for (const auto& a : adm) {
      std::cout << "(" << a.sig.str() << ")";
      for (const auto& gi : a.pairs)
        std::cout << "  g=" << gi.genus << " n=" << gi.index;
      std::cout << "\n";
    }
    std::cout << adm.size() << " admissible signatures for genus <= " << g_max << "\n";
  }
  return kExitOk;
}

int cmd_enumerate(const std::string& sig_str, uint32_t n_max, const std::string& mode,
                  const std::string& checkpoint_out, const std::string& resume_path,
                  const Common& c) {
  Signature sig = parse_sig_or_die(sig_str);
  SearchConfig cfg;
  cfg.n_max = n_max;
  cfg.mode = mode == "all" ? SearchMode::kAll : SearchMode::kTorsionFreeOnly;
  cfg.node_budget = c.budget_nodes;
  cfg.seconds_budget = c.budget_seconds;
  std::optional<SearchCheckpoint> resume;
  if (!resume_path.empty()) {
    std::ifstream f(resume_path, std::ios::binary);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                               std::istreambuf_iterator<char>());
    resume = SearchCheckpoint::deserialize(bytes);
    if (!resume) {
      std::cerr << "cannot parse checkpoint " << resume_path << "\n";
      return kExitUsage;
    }
    cfg = resume->config;
    cfg.node_budget = c.budget_nodes;
    cfg.seconds_budget = c.budget_seconds;
  }
  size_t rows = 0;
  try {
    enumerate_normal(
        sig, cfg,
        [&](const RegularTable& t) {
          QuotientInfo info = analyze_quotient(sig, t.table);
          printf("n=%-5u orders=(%u,%u,%u) torsion_free=%d genus=%s key=%s%s\n", t.table.size(),
                 info.orders[0], info.orders[1], info.orders[2], (int)info.torsion_free,
                 info.genus ? std::to_string(*info.genus).c_str() : "-",
                 digest_hex(info.canonical_key).c_str(), t.whole_group ? " whole-group" : "");
          ++rows;
          return true;
        },
        nullptr, resume ? &*resume : nullptr);
  } catch (const SearchBudgetExceeded& e) {
    std::string path = checkpoint_out.empty() ? "checkpoint.bin" : checkpoint_out;
    auto bytes = e.checkpoint.serialize();
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    std::cerr << "budget exceeded after " << e.stats.nodes << " nodes; checkpoint written to "
              << path << "\n";
    return kExitBudget;
  }
  std::cerr << rows << " normal subgroups\n";
  return kExitOk;
}

int cmd_census(int g_max, uint32_t diag_n, const Common& c) {
  CensusStore store(c.store, g_max);
  store.load();
  CensusRunResult r = run_census(store, c.workers, c.budget_nodes, c.budget_seconds);
  std::cerr << "census units: " << r.units_done << "/" << r.units_total << " complete\n";
  if (diag_n > 0) {
    CensusRunResult d = run_diagnostics(store, diag_n, c.workers, c.budget_nodes,
                                        c.budget_seconds);
    std::cerr << "diagnostics units: " << d.units_done << "/" << d.units_total << " complete\n";
  }
  if (!r.failed.empty()) {
    for (const auto& f : r.failed) std::cerr << "failed: " << f << "\n";
    return kExitBudget;
  }
  return kExitOk;
}

int with_counts(int g, const Common& c, const std::function<int(const CensusStore&)>& fn) {
  CensusStore store(c.store, std::max(g, 2));
  store.load();
  try {
    return fn(store);
  } catch (const IncompleteStore& e) {
    std::cerr << "store incomplete; missing units:\n";
    for (const auto& m : e.missing) std::cerr << "  " << m << "\n";
    return kExitIncomplete;
  }
}

int cmd_report(int g, const Common& c) {
  return with_counts(g, c, [&](const CensusStore& store) {
    CountsReport rep = counts(store, g);
    std::cout << (c.format == "csv" ? rep.csv() : rep.human());
    return kExitOk;
  });
}

int cmd_dedupe(int g, const Common& c) {
  return with_counts(g, c, [&](const CensusStore& store) {
    auto classes = dedupe(store, g);
    size_t max_members = 0;
    for (const auto& cl : classes) {
      if (c.format != "csv")
        printf("genus=%d members=%zu representative=%s\n", cl.genus, cl.member_keys.size(),
               cl.representative_key.c_str());
      max_members = std::max(max_members, cl.member_keys.size());
    }
    printf("Q(%d)=%zu largest_class=%zu\n", g, classes.size(), max_members);
    return kExitOk;
  });
}

int cmd_bounds(int g, const Common& c) {
  return with_counts(g, c, [&](const CensusStore& store) {
    CountsReport rep = counts(store, g);
    printf("g=%d lower=%.12Lg S=%llu upper=%.12Lg exponent=%.12Lg\n", g, rep.lower,
           (unsigned long long)rep.s, rep.upper, rep.exponent);
    printf("envelope check: %.6Lg %s %llu %s %.6Lg\n", rep.lower,
           rep.lower < (long double)rep.s ? "<" : ">=", (unsigned long long)rep.s,
           (long double)rep.s < rep.upper ? "<" : ">=", rep.upper);
    // Lubotzky consistency against stored all-mode diagnostics.
    std::map<std::pair<std::string, uint32_t>, uint64_t> diag_counts;
    std::map<std::string, uint32_t> diag_max;
    for (const auto& d : store.diagnostics()) {
      ++diag_counts[{d.sig.str(), d.n}];
      diag_max[d.sig.str()] = std::max(diag_max[d.sig.str()], d.n);
    }
    for (const auto& [sig_str, nmax] : diag_max) {
      uint64_t total = 0;
      for (const auto& [k, v] : diag_counts)
        if (k.first == sig_str) total += v;
      mpz_class bound = lubotzky_bound(nmax);
      printf("(%s) normal subgroups of index <= %u: %llu <= %s : %s\n", sig_str.c_str(), nmax,
             (unsigned long long)total, bound.get_str().c_str(),
             mpz_class((long)total) <= bound ? "ok" : "VIOLATION");
    }
    return kExitOk;
  });
}

int cmd_validate_inclusions(bool dump, const Common&) {
  if (dump) {
    std::cout << inclusion_rules_json();
    std::cerr << "checksum " << inclusion_rules_checksum() << "\n";
    return kExitOk;
  }
  // Validate every rule over all instantiations with small entries.
  std::set<std::string> rules_hit;
  size_t checked = 0, failed = 0;
  for (int p = 2; p <= 30; ++p)
    for (int q = p; q <= 30; ++q)
      for (int r = q; r <= 30; ++r) {
        auto sig = Signature::make(p, q, r);
        if (!sig) continue;
        for (const RuleInstance& inst : instances_for(*sig)) {
          ValidationReport rep = validate_rule(inst);
          ++checked;
          rules_hit.insert(inst.rule->name);
          for (const auto& line : rep.issues) {
            std::cerr << "FAIL " << line << "\n";
            ++failed;
          }
        }
      }
  size_t missing = 0;
  for (const auto& rule : inclusion_rules())
    if (!rules_hit.count(rule.name)) {
      std::cerr << "FAIL rule never instantiated in range: " << rule.name << "\n";
      ++missing;
    }
  printf("validated %zu instantiations of %zu rules, checksum %s\n", checked,
         rules_hit.size(), inclusion_rules_checksum().c_str());
  return failed + missing == 0 ? kExitOk : kExitIncomplete;
}

int cmd_export(int g_max, std::optional<int> genus, const Common& c) {
  CensusStore store(c.store, g_max);
  store.load();
  std::cout << export_dessins(store, genus);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"census of regular dessins / quasiplatonic surfaces via normal subgroups of "
               "triangle groups"};
  app.require_subcommand(1);
  Common c;

  int g_max = 5;
  std::string sig_str, mode = "torsion-free", checkpoint_out, resume_path;
  uint32_t n_max = 0, diag_n = 0;
  int genus_filter = -1;
  bool dump_rules = false;

  auto* s_sig = app.add_subcommand("signatures", "admissible signatures for a genus bound");
  s_sig->add_option("--max-genus", g_max, "genus bound")->required();
  add_common(s_sig, c);

  auto* s_enum = app.add_subcommand("enumerate", "normal subgroups of one triangle group");
  s_enum->add_option("signature", sig_str, "signature p,q,r")->required();
  s_enum->add_option("--max-index", n_max, "index bound")->required();
  s_enum->add_option("--mode", mode, "all|torsion-free");
  s_enum->add_option("--checkpoint", checkpoint_out, "checkpoint output path on budget stop");
  s_enum->add_option("--resume", resume_path, "resume from a checkpoint file");
  add_common(s_enum, c);

  auto* s_census = app.add_subcommand("census", "run the full census to a genus bound");
  s_census->add_option("--max-genus", g_max, "genus bound")->required();
  s_census->add_option("--diagnostics-index", diag_n,
                       "also run all-mode diagnostics to this index");
  add_common(s_census, c);

  auto* s_report = app.add_subcommand("report", "counts report for a complete store");
  s_report->add_option("--max-genus", g_max, "genus bound")->required();
  add_common(s_report, c);

  auto* s_dedupe = app.add_subcommand("dedupe", "surface classes for a complete store");
  s_dedupe->add_option("--max-genus", g_max, "genus bound")->required();
  add_common(s_dedupe, c);

  auto* s_bounds = app.add_subcommand("bounds", "envelope and bound checks");
  s_bounds->add_option("--max-genus", g_max, "genus bound")->required();
  add_common(s_bounds, c);

  auto* s_val = app.add_subcommand("validate-inclusions", "validate the inclusion rule table");
  s_val->add_flag("--dump", dump_rules, "print the rule table JSON");
  add_common(s_val, c);

  auto* s_export = app.add_subcommand("export", "monodromy export of stored dessins");
  s_export->add_option("--max-genus", g_max, "store genus bound")->required();
  s_export->add_option("--genus", genus_filter, "only this genus");
  add_common(s_export, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  resolve_config(c);

  try {
    if (s_sig->parsed()) return cmd_signatures(g_max, c);
    if (s_enum->parsed()) return cmd_enumerate(sig_str, n_max, mode, checkpoint_out,
                                               resume_path, c);
    if (s_census->parsed()) return cmd_census(g_max, diag_n, c);
    if (s_report->parsed()) return cmd_report(g_max, c);
    if (s_dedupe->parsed()) return cmd_dedupe(g_max, c);
    if (s_bounds->parsed()) return cmd_bounds(g_max, c);
    if (s_val->parsed()) return cmd_validate_inclusions(dump_rules, c);
    if (s_export->parsed())
      return cmd_export(g_max, genus_filter >= 0 ? std::optional<int>(genus_filter)
                                                 : std::nullopt, c);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
