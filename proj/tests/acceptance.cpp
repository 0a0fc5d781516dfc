// Prints one PASS/FAIL line per acceptance criterion. Exit status is the
// number of failing criteria not listed with --allow-fail.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "dicupit/baseline_pits.hpp"
#include "dicupit/bench.hpp"
#include "dicupit/dicupit_pit.hpp"
#include "dicupit/router_sim.hpp"

using namespace dicupit;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

// Randomized insert/query/delete against a multiset of live names.
Verdict criterion1() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  std::uint64_t false_negatives = 0, involution_errors = 0, dup_errors = 0, ops_total = 0;
  for (std::uint32_t seed = 0; seed < 20; ++seed) {
    FilterConfig c;
    c.num_buckets = 4096;
    c.fingerprint_bits = 12;
    c.seed = seed;
    CuckooFilter f(c);
    const CuckooCodec& codec = f.codec();
    std::mt19937_64 rng(seed * 7919 + 1);
    const auto pool = bench_names(20000, seed + 1000, "c1");
    std::unordered_map<std::string, std::uint32_t> live;
    std::vector<std::string> live_list;
    auto pick_live = [&]() -> const std::string& { return live_list[uniform_index(rng, live_list.size())]; };
    auto drop = [&](const std::string& n) {
      if (--live[n] == 0) {
        live.erase(n);
        live_list.erase(std::find(live_list.begin(), live_list.end(), n));
      }
    };
    for (std::uint64_t op = 0; op < 100000; ++op, ++ops_total) {
      const double r = uniform_unit(rng);
      const std::string& name = pool[uniform_index(rng, pool.size())];
      const CuckooKey key = codec.key_for(name);
      if (codec.alt_bucket(key.buckets.second, key.fingerprint) != key.buckets.first ||
          codec.alt_bucket(key.buckets.first, key.fingerprint) != key.buckets.second) {
        ++involution_errors;
      }
      if (r < 0.45 && f.load_factor() < 0.9) {
        if (f.insert(name).stored()) {
          if (live[name]++ == 0) live_list.push_back(name);
        }
      } else if (r < 0.7 && !live_list.empty()) {
        const std::string n = pick_live();
        const bool duplicate = live[n] > 1;
        if (!f.erase(n)) ++false_negatives;
        drop(n);
        if (duplicate && !f.contains(n)) ++dup_errors;
      } else if (!live_list.empty()) {
        if (!f.contains(pick_live())) ++false_negatives;
      }
    }
    for (const auto& [n, count] : live) {
      if (!f.contains(n)) ++false_negatives;
    }
    // Explicit duplicate check on a fresh filter.
    CuckooFilter d(c);
    d.insert("dup/name");
    d.insert("dup/name");
    d.erase("dup/name");
    if (!d.contains("dup/name")) ++dup_errors;
  }
  const double secs = seconds_since(start);
  v.require(false_negatives == 0, fmt("%.0f false negatives", static_cast<double>(false_negatives)));
  v.require(involution_errors == 0, fmt("%.0f involution errors", static_cast<double>(involution_errors)));
  v.require(dup_errors == 0, fmt("%.0f duplicate-delete errors", static_cast<double>(dup_errors)));
  v.require(secs < 30, fmt("took %.1f s", secs));
  v.detail += (v.detail.empty() ? "" : "; ") + fmt("%.0f ops in %.2f s", static_cast<double>(ops_total), secs);
  return v;
}

Verdict criterion2() {
  Verdict v;
  std::string worst;
  double worst_ratio = 1;
  for (std::uint32_t f : {6U, 12U}) {
    for (double alpha : {0.25, 0.5, 0.75, 0.95}) {
      FilterConfig c;
      c.num_buckets = 4096;
      c.fingerprint_bits = f;
      c.seed = 3;
      const FilterFprPoint p = measure_filter_fpr(c, alpha, 100000, 17);
      const double ratio = p.measured > p.predicted ? p.measured / p.predicted : p.predicted / p.measured;
      v.require(ratio <= 1.5, fmt("f=%.0f alpha=%.2f ratio %.3f", f, alpha, ratio));
      worst_ratio = std::max(worst_ratio, ratio);
    }
  }
  FilterConfig base;
  base.num_buckets = 4096;
  std::uint32_t best_f = 0;
  for (const auto& p : fingerprint_sweep(6, 16, 0.95, base, 100000, 19)) {
    if (p.measured < 0.01 && best_f == 0) best_f = p.fp_bits;
  }
  v.require(best_f != 0, "no f <= 16 reaches 1% at alpha 0.95");
  v.detail += (v.detail.empty() ? "" : "; ") +
              fmt("worst ratio %.3f, smallest f under 1%% at 0.95: %.0f", worst_ratio, best_f);
  return v;
}

PitSizing trace_sizing(std::uint32_t seed) {
  PitSizing s;
  s.entries_per_port = 2000;
  s.global_multiplier = 2;
  s.fingerprint_bits = 6;
  s.seed = seed;
  return s;
}

std::vector<TraceEvent> trace_for(std::uint64_t seed, std::uint64_t events) {
  static const NameCorpus corpus = gen_names(200000, 0.9, 7);
  WorkloadSpec w;
  w.dup_prob = 0.3;
  w.rate_per_port = 1e4;
  w.seed = seed;
  w.num_interests = interests_for_events(events, w.dup_prob);
  return gen_trace(corpus, w);
}

Verdict criterion3() {
  Verdict v;
  std::uint64_t episodes = 0, deviating = 0, explained = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto trace = trace_for(seed, 100000);
    const PitSizing s = trace_sizing(static_cast<std::uint32_t>(seed));
    auto pit = make_pit(PitKind::DiCuPit, s);
    const ReplayResult r = replay_pit(*pit, trace);
    const CollisionClassifier cls(trace, static_cast<const DiCuPit&>(*pit).sub_tables().codec());
    const AggregationCheck c = check_single_forward(trace, r, &cls);
    v.require(c.insert_failed == 0, fmt("seed %.0f: %.0f insert failures", seed, c.insert_failed));
    v.require(c.deviating_unexplained == 0,
              fmt("seed %.0f: %.0f episodes without exactly one forward", seed, c.deviating_unexplained));
    // The exact reference must be perfect.
    OraclePit oracle(s.ports);
    const AggregationCheck o = check_single_forward(trace, replay_pit(oracle, trace), nullptr);
    v.require(o.deviating == 0, fmt("seed %.0f: reference deviates %.0f", seed, o.deviating));
    episodes += c.episodes;
    deviating += c.deviating;
    explained += c.deviating - c.deviating_unexplained;
  }
  v.detail += (v.detail.empty() ? "" : "; ") +
              fmt("%.0f episodes, %.0f deviating, all %.0f collision-explained", episodes, deviating, explained);
  return v;
}

Verdict criterion4(bool skip_timing) {
  Verdict v;
  const auto names = bench_names(400, 4, "h");
  for (std::uint32_t k : {2U, 4U, 8U, 16U}) {
    PitSizing s;
    s.ports = k;
    s.fingerprint_bits = 12;
    auto pit = make_pit(PitKind::DiCuPit, s);
    std::uint64_t worst = 0;
    for (std::size_t i = 0; i < names.size(); ++i) {
      const HashScope a;
      pit->on_interest(names[i], static_cast<std::uint32_t>((i * 7) % k), Timestamp16{});
      worst = std::max(worst, a.delta().packet());
      const HashScope b;
      pit->lookup(names[(i * 13) % names.size()], Timestamp16{});
      worst = std::max(worst, b.delta().packet());
      if (i % 3 == 0) {
        const HashScope c;
        pit->on_data(names[i / 2], Timestamp16{});
        worst = std::max(worst, c.delta().packet());
      }
    }
    v.require(worst <= 2, fmt("k=%.0f: %.0f hashes per packet", k, static_cast<double>(worst)));
  }
  DiPit dipit(DiPitConfig{});
  const HashScope d;
  for (std::size_t i = 0; i < names.size(); ++i) {
    dipit.on_interest(names[i], static_cast<std::uint32_t>(i % 8), Timestamp16{});
    if (i % 2) dipit.on_data(names[i / 2], Timestamp16{});
  }
  v.require(d.delta().total == 5 * dipit.filter_consults(), "DiPIT hashes != 5 per filter consulted");

  if (skip_timing) {
    v.detail += (v.detail.empty() ? "" : "; ") + std::string("timing skipped");
    return v;
  }
  std::string timings;
  for (std::uint64_t n : {100000ULL, 1000000ULL, 2000000ULL}) {
    const auto present = bench_names(n, 1, "p");
    const auto absent = bench_names(std::min<std::uint64_t>(n, 1000000), 2, "a");
    LookupParams p;
    p.runs = 5;
    double t[3];
    const PitKind kinds[3] = {PitKind::DiCuPit, PitKind::DiPit, PitKind::Chain};
    for (int i = 0; i < 3; ++i) t[i] = run_lookup(kinds[i], present, absent, p).mean_ns;
    v.require(t[0] < t[1], fmt("N=%.0f: dicupit %.1f ns >= dipit", static_cast<double>(n), t[0]) + fmt(" %.1f ns", t[1]));
    v.require(t[0] < t[2], fmt("N=%.0f: dicupit %.1f ns >= chain", static_cast<double>(n), t[0]) + fmt(" %.1f ns", t[2]));
    timings += fmt(" N=%.0f: %.0f/", static_cast<double>(n), t[0]) + fmt("%.0f/%.0f", t[1], t[2]);
  }
  v.detail += (v.detail.empty() ? "" : "; ") + std::string("ns dicupit/dipit/chain") + timings;
  return v;
}

Verdict criterion5() {
  Verdict v;
  const MemorySummary s = memory_table(default_rates());
  const double a = 100 * s.mean_improvement_vs_dipit;
  const double b = 100 * s.mean_improvement_vs_hash_tables;
  v.require(a >= 23 && a <= 39, fmt("vs DiPIT %.1f%% outside 31 +/- 8", a));
  v.require(b >= 58 && b <= 78, fmt("vs hash tables %.1f%% outside 68 +/- 10", b));
  v.detail += (v.detail.empty() ? "" : "; ") + fmt("vs DiPIT %.2f%%, vs hash tables %.2f%%", a, b);
  return v;
}

Verdict criterion6() {
  Verdict v;
  for (PitKind kind : all_pit_kinds(true)) {
    const std::string k(to_string(kind));
    SimConfig cfg;
    cfg.pit = kind;
    cfg.record_actions = true;
    Simulation sim(fanout_topology(), cfg);
    const auto trace = fanout_trace();
    auto kinds_since = [&](std::size_t from) {
      std::vector<ActionKind> out;
      for (std::size_t i = from; i < sim.actions().size(); ++i) out.push_back(sim.actions()[i].kind);
      return out;
    };
    std::size_t mark = 0;
    sim.step(trace[0]);
    v.require(kinds_since(mark) == std::vector{ActionKind::PitInsert, ActionKind::FibForward},
              k + ": first interest not inserted and forwarded");
    mark = sim.actions().size();
    sim.step(trace[1]);
    v.require(kinds_since(mark) == std::vector{ActionKind::Aggregated}, k + ": second interest not aggregated");
    mark = sim.actions().size();
    sim.step(trace[2]);
    const bool fanout = sim.actions().size() > mark && sim.actions()[mark].kind == ActionKind::DataFanout &&
                        sim.actions()[mark].interfaces == InterfaceSet{1, 2};
    v.require(fanout, k + ": data not fanned out to {1,2}");
    v.require(sim.pit("R1").size() == 0, k + ": entry not deleted");
    mark = sim.actions().size();
    sim.step(trace[3]);
    v.require(!kinds_since(mark).empty() && kinds_since(mark).front() == ActionKind::CsHit, k + ": no CS hit");
    v.require(sim.report().delivered == 3, k + ": delivered != 3");
  }
  if (v.pass) v.detail = "all 5 PITs";
  return v;
}

Verdict criterion7() {
  Verdict v;
  std::string detail;
  for (std::uint64_t seed : {3ULL, 4ULL}) {
    const auto trace = trace_for(seed, 100000);
    const OracleDiff d = oracle_diff(trace, trace_sizing(static_cast<std::uint32_t>(seed)));
    v.require(d.divergent_unexplained == 0,
              fmt("seed %.0f: %.0f divergences not explained by collisions", seed, d.divergent_unexplained));
    v.require(d.rate <= 1.5 * d.bound, fmt("seed %.0f: rate %.4f > 1.5 x bound %.4f", seed, d.rate, d.bound));
    detail += fmt(" seed %.0f: rate %.4f bound %.4f", seed, d.rate, d.bound) +
              fmt(" (%.0f divergent, %.0f insert failures)", d.divergent, d.insert_failed);
  }
  v.detail += (v.detail.empty() ? "" : ";") + detail;
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> allowed;
  bool skip_timing = false;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--allow-fail") && i + 1 < argc) {
      allowed.insert(std::atoi(argv[++i]));
    } else if (!std::strcmp(argv[i], "--skip-timing")) {
      skip_timing = true;
    } else if (!std::strcmp(argv[i], "--only") && i + 1 < argc) {
      only.insert(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: acceptance [--only N]... [--allow-fail N]... [--skip-timing]\n");
      return 2;
    }
  }
  struct Criterion {
    int id;
    const char* title;
    Verdict (*run)(bool);
  };
  const Criterion criteria[] = {
      {1, "cuckoo core properties", [](bool) { return criterion1(); }},
      {2, "FPR oracle agreement", [](bool) { return criterion2(); }},
      {3, "single forward per pending name", [](bool) { return criterion3(); }},
      {4, "hash economy and lookup ordering", [](bool skip) { return criterion4(skip); }},
      {5, "memory model", [](bool) { return criterion5(); }},
      {6, "fan-out scenario", [](bool) { return criterion6(); }},
      {7, "oracle equivalence", [](bool) { return criterion7(); }},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run(skip_timing);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const bool tolerated = !v.pass && allowed.count(c.id);
    std::printf("criterion %d %s: %s%s (%s) [%.1f s]\n", c.id, c.title, v.pass ? "PASS" : "FAIL",
                tolerated ? " (allowed)" : "", v.detail.c_str(), seconds_since(start));
    std::fflush(stdout);
    if (!v.pass && !tolerated) ++failures;
  }
  return failures;
}
