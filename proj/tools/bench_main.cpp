#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <new>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "dicupit/bench.hpp"
#include "dicupit/router_sim.hpp"

using namespace dicupit;

namespace {

struct Common {
  std::string impl = "all";
  std::uint32_t ports = 8;
  std::uint64_t buckets = 0;
  std::uint32_t slots = 4;
  std::uint32_t fp_bits = 6;
  std::uint32_t max_kicks = 150;
  std::uint64_t rtt_us = 80000;
  std::uint32_t seed = 1;
  std::string out = "-";
  std::string names;
};

std::vector<PitKind> impls_of(const Common& c, bool with_oracle) {
  if (c.impl == "all") return all_pit_kinds(with_oracle);
  return {parse_pit_kind(c.impl)};
}

PitSizing sizing_of(const Common& c) {
  PitSizing s;
  s.ports = c.ports;
  s.num_buckets = c.buckets;
  s.bucket_slots = c.slots;
  s.fingerprint_bits = c.fp_bits;
  s.max_kicks = c.max_kicks;
  s.seed = c.seed;
  return s;
}

void emit(const Common& c, const std::vector<CsvRow>& rows) {
  if (c.out == "-") {
    write_csv(std::cout, rows);
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw std::runtime_error("cannot write " + c.out);
  write_csv(f, rows);
}

std::vector<std::string> present_names(const Common& c, std::uint64_t n) {
  if (c.names.empty()) return bench_names(n, c.seed, "p");
  auto names = load_names_file(c.names);
  if (names.size() > n) names.resize(n);
  return names;
}

// Independent PIT per worker; aggregate lookups per second.
double throughput(PitKind kind, const std::vector<std::string>& present, const std::vector<std::string>& absent,
                  const PitSizing& sizing, std::uint64_t lookups, unsigned workers) {
  std::vector<double> seconds(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      PitSizing s = sizing;
      s.entries_per_port = (present.size() + s.ports - 1) / s.ports;
      auto pit = make_pit(kind, s);
      for (std::size_t i = 0; i < present.size(); ++i) {
        pit->on_interest(present[i], static_cast<std::uint32_t>(i % s.ports), Timestamp16{0});
      }
      std::uint64_t sink = 0;
      const auto t0 = std::chrono::steady_clock::now();
      for (std::uint64_t i = 0; i < lookups; ++i) {
        const auto& pool_names = i % 2 ? absent : present;
        sink += pit->lookup(pool_names[(i * 2654435761ULL + w) % pool_names.size()], Timestamp16{0}).bits();
      }
      seconds[w] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      asm volatile("" : : "r"(sink) : "memory");
    });
  }
  for (auto& t : pool) t.join();
  double ops = 0;
  for (double s : seconds) ops += static_cast<double>(lookups) / s;
  return ops;
}

int run_memory(const Common& c, const std::vector<double>& rates, double rate_unit) {
  MemoryModelParams p;
  p.ports = c.ports;
  p.rtt_us = c.rtt_us;
  p.packets_per_rate_unit = rate_unit;
  p.fingerprint_bits = c.fp_bits;
  p.bucket_slots = c.slots;
  auto rows = cmd_memory(rates, p, c.seed);
  if (c.impl != "all") {
    std::erase_if(rows, [&](const CsvRow& r) { return r.impl != c.impl; });
  }
  emit(c, rows);
  return 0;
}

int run_lookup_cmd(const Common& c, const std::vector<std::uint64_t>& counts, std::uint64_t lookups,
                   std::uint32_t runs, unsigned workers) {
  std::vector<CsvRow> rows;
  for (std::uint64_t n : counts) {
    try {
      const auto present = present_names(c, n);
      const auto absent = bench_names(present.size(), c.seed + 1, "a");
      for (PitKind k : impls_of(c, false)) {
        LookupParams lp;
        lp.sizing = sizing_of(c);
        lp.lookups = lookups;
        lp.runs = runs;
        const LookupResult r = run_lookup(k, present, absent, lp);
        auto more = lookup_rows(r, lp.sizing);
        rows.insert(rows.end(), more.begin(), more.end());
        if (workers > 1) {
          rows.push_back({std::string(to_string(k)), c.ports, r.names, c.fp_bits, "throughput_ops_per_s",
                          std::round(throughput(k, present, absent, lp.sizing, lookups, workers)), "ops/s", c.seed});
        }
      }
    } catch (const std::bad_alloc&) {
      rows.push_back({c.impl, c.ports, n, c.fp_bits, "partial", 1, "flag", c.seed});
      break;
    }
  }
  emit(c, rows);
  return 0;
}

int run_fpr_cmd(const Common& c, std::uint64_t n, bool sweep, double alpha, std::uint64_t probes) {
  std::vector<CsvRow> rows;
  if (sweep) {
    FilterConfig base;
    base.num_buckets = c.buckets ? c.buckets : 4096;
    base.bucket_slots = c.slots;
    base.max_kicks = c.max_kicks;
    base.seed = c.seed;
    rows = sweep_rows(fingerprint_sweep(6, 16, alpha, base, probes, c.seed), base, c.seed);
  } else {
    const auto present = present_names(c, n);
    const auto absent = bench_names(present.size(), c.seed + 1, "a");
    PitSizing s = sizing_of(c);
    s.entries_per_port = std::max<std::uint64_t>(1, (present.size() + s.ports - 1) / s.ports);
    for (PitKind k : impls_of(c, false)) {
      auto more = fpr_rows(k, s, run_fpr(k, s, present, absent));
      rows.insert(rows.end(), more.begin(), more.end());
    }
  }
  emit(c, rows);
  return 0;
}

int run_replay_cmd(const Common& c, const std::string& topo_path, const std::string& trace_path,
                   const std::string& report_path, std::uint64_t entries) {
  const Topology topo = topo_path.empty() ? fanout_topology() : Topology::load(topo_path);
  std::vector<TraceEvent> trace;
  if (trace_path.empty()) {
    trace = fanout_trace();
  } else {
    std::ifstream in(trace_path);
    if (!in) throw std::runtime_error("cannot open trace " + trace_path);
    trace = read_trace_csv(in);
  }
  std::vector<CsvRow> rows;
  nlohmann::ordered_json reports = nlohmann::ordered_json::object();
  for (PitKind k : impls_of(c, true)) {
    SimConfig cfg;
    cfg.pit = k;
    cfg.sizing = sizing_of(c);
    cfg.sizing.entries_per_port = entries;
    const SimReport r = run_scenario(topo, trace, cfg);
    const std::string impl(to_string(k));
    reports[impl] = nlohmann::ordered_json::parse(report_json(r));
    const std::pair<const char*, std::uint64_t> counters[] = {
        {"interests", r.interests},         {"data_events", r.data_events},
        {"delivered", r.delivered},         {"aggregated", r.aggregated},
        {"forwarded", r.forwarded},         {"cs_hits", r.cs_hits},
        {"dropped_fp", r.dropped_fp},       {"dropped_no_route", r.dropped_no_route},
        {"dropped_insert_failed", r.dropped_insert_failed},
        {"unanswered_data", r.unanswered_data},
        {"misdelivered", r.misdelivered},
    };
    for (const auto& [metric, v] : counters) {
      rows.push_back({impl, c.ports, entries, c.fp_bits, metric, static_cast<double>(v), "count", c.seed});
    }
  }
  if (!report_path.empty()) {
    std::ofstream f(report_path);
    if (!f) throw std::runtime_error("cannot write " + report_path);
    f << reports.dump(2) << '\n';
  }
  emit(c, rows);
  return 0;
}

int run_gen_cmd(const Common& c, std::uint64_t count, double zipf_s, const WorkloadSpec& w, const std::string& names_out) {
  NameCorpus corpus;
  if (c.names.empty()) {
    corpus = gen_names(count, zipf_s, c.seed);
  } else {
    corpus.names = load_names_file(c.names);
    corpus.weights = zipf_weights(corpus.names.size(), zipf_s);
  }
  if (!names_out.empty()) {
    std::ofstream f(names_out);
    if (!f) throw std::runtime_error("cannot write " + names_out);
    for (const auto& n : corpus.names) f << n << '\n';
  }
  WorkloadSpec spec = w;
  spec.ports = c.ports;
  spec.rtt_us = c.rtt_us;
  spec.zipf_s = zipf_s;
  spec.seed = c.seed;
  const auto trace = gen_trace(corpus, spec);
  if (c.out == "-") {
    write_trace_csv(std::cout, trace);
  } else {
    std::ofstream f(c.out);
    if (!f) throw std::runtime_error("cannot write " + c.out);
    write_trace_csv(f, trace);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PIT benchmarks: memory, lookup, false positives, replay, trace generation"};
  app.require_subcommand(1);
  app.fallthrough();

  Common c;
  app.add_option("--impl", c.impl, "dicupit, dipit, chain, ht32, oracle or all")
      ->check(CLI::IsMember({"all", "dicupit", "dipit", "chain", "ht32", "oracle"}));
  app.add_option("--ports", c.ports, "interfaces per router")->check(CLI::Range(1, 32));
  app.add_option("--buckets", c.buckets, "buckets per cuckoo table (power of two, 0 derives)");
  app.add_option("--slots", c.slots, "slots per bucket")->check(CLI::Range(1, 16));
  app.add_option("--fp-bits", c.fp_bits, "fingerprint bits")->check(CLI::Range(4, 16));
  app.add_option("--max-kicks", c.max_kicks, "evictions before an insert fails");
  app.add_option("--rtt-us", c.rtt_us, "round trip time in microseconds")->check(CLI::PositiveNumber);
  app.add_option("--seed", c.seed);
  app.add_option("--out", c.out, "output file, - for stdout");
  app.add_option("--names", c.names, "name file, one per line")->check(CLI::ExistingFile);

  auto* mem = app.add_subcommand("memory", "analytic memory per implementation and line rate");
  std::vector<double> rates = default_rates();
  double rate_unit = 1e6;
  mem->add_option("--rates", rates, "line rates")->delimiter(',')->check(CLI::NonNegativeNumber);
  mem->add_option("--rate-unit", rate_unit, "packets per second per rate unit")->check(CLI::PositiveNumber);

  auto* lk = app.add_subcommand("lookup", "lookup latency after inserting N names");
  std::vector<std::uint64_t> counts{100000};
  std::uint64_t lookups = 200000;
  std::uint32_t runs = 5;
  unsigned workers = 1;
  lk->add_option("-n,--count", counts, "name counts")->delimiter(',')->check(CLI::PositiveNumber);
  lk->add_option("--lookups", lookups)->check(CLI::PositiveNumber);
  lk->add_option("--runs", runs)->check(CLI::PositiveNumber);
  lk->add_option("--workers", workers, "parallel independent PITs for throughput")->check(CLI::Range(1, 256));

  auto* fpr = app.add_subcommand("fpr", "false positives against disjoint probe names");
  std::uint64_t fpr_n = 100000;
  bool sweep = false;
  double alpha = 0.95;
  std::uint64_t probes = 100000;
  fpr->add_option("-n,--count", fpr_n)->check(CLI::PositiveNumber);
  fpr->add_flag("--sweep", sweep, "single-filter FPR for fingerprint widths 6..16");
  fpr->add_option("--alpha", alpha, "filter load for --sweep")->check(CLI::Range(0.0, 1.0));
  fpr->add_option("--probes", probes)->check(CLI::PositiveNumber);

  auto* rp = app.add_subcommand("replay", "trace replay through the router simulator");
  std::string topo_path, trace_path, report_path;
  std::uint64_t entries = 1000;
  rp->add_option("--topology", topo_path, "topology file (default: three-consumer fixture)")->check(CLI::ExistingFile);
  rp->add_option("--trace", trace_path, "trace CSV (default: fixture trace)")->check(CLI::ExistingFile);
  rp->add_option("--report", report_path, "JSON report path");
  rp->add_option("--entries", entries, "expected pending entries per port")->check(CLI::PositiveNumber);

  auto* gen = app.add_subcommand("gen", "generate names and an interest/data trace");
  std::uint64_t count = 10000;
  double zipf_s = 0.9;
  WorkloadSpec w;
  std::string names_out;
  gen->add_option("--count", count, "synthetic names")->check(CLI::PositiveNumber);
  gen->add_option("--zipf", zipf_s)->check(CLI::NonNegativeNumber);
  gen->add_option("--interests", w.num_interests)->check(CLI::PositiveNumber);
  gen->add_option("--dup", w.dup_prob)->check(CLI::Range(0.0, 1.0));
  gen->add_option("--rate", w.rate_per_port, "interests per second per port")->check(CLI::PositiveNumber);
  gen->add_option("--names-out", names_out);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*mem) return run_memory(c, rates, rate_unit);
    if (*lk) return run_lookup_cmd(c, counts, lookups, runs, workers);
    if (*fpr) return run_fpr_cmd(c, fpr_n, sweep, alpha, probes);
    if (*rp) return run_replay_cmd(c, topo_path, trace_path, report_path, entries);
    if (*gen) return run_gen_cmd(c, count, zipf_s, w, names_out);
  } catch (const std::exception& e) {
    std::cerr << "bench: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
