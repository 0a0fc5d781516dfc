#include "dicupit/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "dicupit/baseline_pits.hpp"
#include "dicupit/dicupit_pit.hpp"
#include "dicupit/hashing.hpp"

namespace dicupit {

std::string format_value(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15) {
    return std::to_string(static_cast<long long>(v));
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.impl << ',' << r.ports << ',' << r.entries << ',' << r.fp_bits << ',' << r.metric << ','
        << format_value(r.value) << ',' << r.unit << ',' << r.seed << '\n';
  }
}

std::vector<double> default_rates() {
  std::vector<double> r;
  for (int i = 10; i <= 100; i += 10) r.push_back(i);
  return r;
}

std::vector<CsvRow> cmd_memory(const std::vector<double>& rates, const MemoryModelParams& p, std::uint64_t seed) {
  const MemorySummary summary = memory_table(rates, p);
  std::vector<CsvRow> rows;
  for (const auto& row : summary.rows) {
    const auto entries = static_cast<std::uint64_t>(std::llround(row.entries_per_port));
    const std::pair<const char*, double> impls[] = {
        {"dicupit", row.dicupit_bits}, {"dipit", row.dipit_bits}, {"chain", row.chain_bits}, {"ht32", row.ht32_bits}};
    for (const auto& [name, bits] : impls) {
      rows.push_back({name, p.ports, entries, p.fingerprint_bits, "memory_bits", std::ceil(bits), "bits", seed});
    }
    rows.push_back({"dicupit", p.ports, entries, p.fingerprint_bits, "improvement_vs_dipit",
                    row.improvement_vs_dipit(), "ratio", seed});
    rows.push_back({"dicupit", p.ports, entries, p.fingerprint_bits, "improvement_vs_hash_tables",
                    row.improvement_vs_hash_tables(), "ratio", seed});
  }
  rows.push_back({"dicupit", p.ports, 0, p.fingerprint_bits, "mean_improvement_vs_dipit",
                  summary.mean_improvement_vs_dipit, "ratio", seed});
  rows.push_back({"dicupit", p.ports, 0, p.fingerprint_bits, "mean_improvement_vs_hash_tables",
                  summary.mean_improvement_vs_hash_tables, "ratio", seed});
  return rows;
}

// ---------------------------------------------------------------------------

std::vector<std::string> bench_names(std::uint64_t count, std::uint64_t seed, std::string_view prefix) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> out;
  out.reserve(count);
  static constexpr std::string_view kDirs[] = {"video", "img", "news", "docs", "api", "static", "user", "cdn"};
  for (std::uint64_t i = 0; i < count; ++i) {
    std::string n(prefix);
    n += '/';
    n += kDirs[uniform_index(rng, std::size(kDirs))];
    n += "/s";
    n += std::to_string(uniform_index(rng, 1000));
    n += "/obj";
    n += std::to_string(i);
    n += ".bin";
    out.push_back(std::move(n));
  }
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double median(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

PitSizing sized_for(const PitSizing& base, std::uint64_t names) {
  PitSizing s = base;
  s.entries_per_port = std::max<std::uint64_t>(1, (names + s.ports - 1) / s.ports);
  return s;
}

}  // namespace

LookupResult run_lookup(PitKind kind, const std::vector<std::string>& present, const std::vector<std::string>& absent,
                        const LookupParams& params) {
  if (present.empty() || absent.empty()) throw std::invalid_argument("run_lookup needs present and absent names");
  const PitSizing sizing = sized_for(params.sizing, present.size());
  LookupResult res;
  res.kind = kind;
  res.names = present.size();
  const Timestamp16 now{0};

  std::vector<const std::string*> queries;
  queries.reserve(params.lookups);
  std::mt19937_64 rng(sizing.seed ^ 0x5eedULL);
  for (std::uint64_t i = 0; i < params.lookups; ++i) {
    const auto& pool = (i % 2 == 0) ? present : absent;
    queries.push_back(&pool[uniform_index(rng, pool.size())]);
  }

  std::vector<double> p99s;
  for (std::uint32_t run = 0; run < std::max<std::uint32_t>(1, params.runs); ++run) {
    auto pit = make_pit(kind, sizing);
    for (std::size_t i = 0; i < present.size(); ++i) {
      if (pit->on_interest(present[i], static_cast<std::uint32_t>(i % sizing.ports), now) ==
          InterestDecision::InsertFailed) {
        ++res.insert_failed;
      }
    }
    res.memory_bits = pit->memory_bits();

    // Warm-up pass, then the timed batch.
    std::uint64_t sink = 0;
    for (std::size_t i = 0; i < std::min<std::size_t>(queries.size(), 10000); ++i) {
      sink += pit->lookup(*queries[i], now).bits();
    }
    const HashScope hs;
    const std::uint64_t probes_before = probe_counters().bucket_probes;
    const auto t0 = Clock::now();
    for (const std::string* q : queries) sink += pit->lookup(*q, now).bits();
    const auto t1 = Clock::now();
    const double ops = static_cast<double>(queries.size());
    res.run_means.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count() / ops);
    res.hashes_per_op = static_cast<double>(hs.delta().packet()) / ops;
    res.probes_per_op = static_cast<double>(probe_counters().bucket_probes - probes_before) / ops;

    const std::size_t samples = std::min<std::size_t>(queries.size(), params.p99_samples);
    std::vector<double> lat(samples);
    for (std::size_t i = 0; i < samples; ++i) {
      const auto a = Clock::now();
      sink += pit->lookup(*queries[i], now).bits();
      const auto b = Clock::now();
      lat[i] = std::chrono::duration<double, std::nano>(b - a).count();
    }
    if (!lat.empty()) {
      const std::size_t k = std::min(lat.size() - 1, static_cast<std::size_t>(std::ceil(0.99 * lat.size())) - 1);
      std::nth_element(lat.begin(), lat.begin() + static_cast<std::ptrdiff_t>(k), lat.end());
      p99s.push_back(lat[k]);
    }
    asm volatile("" : : "r"(sink) : "memory");
  }
  res.mean_ns = median(res.run_means);
  res.p99_ns = median(p99s);
  return res;
}

// ---------------------------------------------------------------------------

std::vector<CsvRow> lookup_rows(const LookupResult& r, const PitSizing& sizing) {
  const std::string impl(to_string(r.kind));
  const std::pair<const char*, std::pair<double, const char*>> metrics[] = {
      {"mean_lookup_ns", {r.mean_ns, "ns"}},
      {"p99_lookup_ns", {r.p99_ns, "ns"}},
      {"hash_invocations_per_op", {r.hashes_per_op, "count"}},
      {"bucket_probes_per_op", {r.probes_per_op, "count"}},
      {"memory_bits", {static_cast<double>(r.memory_bits), "bits"}},
      {"insert_failed", {static_cast<double>(r.insert_failed), "count"}},
  };
  std::vector<CsvRow> rows;
  for (const auto& [metric, v] : metrics) {
    rows.push_back({impl, sizing.ports, r.names, sizing.fingerprint_bits, metric, v.first, v.second, sizing.seed});
  }
  return rows;
}

double cuckoo_fpr_bound(std::uint32_t fp_bits, std::uint32_t bucket_slots, double alpha) {
  return 1.0 - std::pow(1.0 - std::ldexp(1.0, -static_cast<int>(fp_bits)), 2.0 * bucket_slots * alpha);
}

namespace {

double summed_load(const Pit& pit) {
  const auto* d = dynamic_cast<const DiCuPit*>(&pit);
  if (!d) return 0;
  const double sub = static_cast<double>(d->sub_tables().total_items()) / d->sub_tables().slots_per_lane();
  const double glob = static_cast<double>(d->global_table().total_items()) / d->global_table().slots_per_lane();
  return sub + glob;
}

}  // namespace

FprResult run_fpr(PitKind kind, const PitSizing& sizing, const std::vector<std::string>& present,
                  const std::vector<std::string>& absent) {
  {
    std::unordered_set<std::string_view> seen(present.begin(), present.end());
    for (const auto& a : absent) {
      if (seen.count(a)) throw std::invalid_argument("fpr: probe name '" + a + "' is also inserted");
    }
  }
  auto pit = make_pit(kind, sizing);
  FprResult r;
  const Timestamp16 now{0};
  for (std::size_t i = 0; i < present.size(); ++i) {
    if (pit->on_interest(present[i], static_cast<std::uint32_t>(i % sizing.ports), now) ==
        InterestDecision::InsertFailed) {
      ++r.insert_failed;
    }
  }
  r.inserted = present.size() - r.insert_failed;
  r.sum_load = summed_load(*pit);
  std::uint64_t loss = 0;
  std::uint64_t misforward = 0;
  for (const auto& a : absent) {
    if (pit->would_aggregate(a, now)) ++loss;
    if (!pit->lookup(a, now).empty()) ++misforward;
  }
  r.probes = absent.size();
  if (r.probes) {
    r.interest_loss_rate = static_cast<double>(loss) / static_cast<double>(r.probes);
    r.data_misforward_rate = static_cast<double>(misforward) / static_cast<double>(r.probes);
  }
  return r;
}

FilterFprPoint measure_filter_fpr(const FilterConfig& config, double alpha, std::uint64_t probes, std::uint64_t seed) {
  CuckooFilter filter(config);
  const auto target = static_cast<std::uint64_t>(std::llround(alpha * static_cast<double>(filter.capacity())));
  // A refused insert leaves the filter unchanged, so filling continues with
  // fresh names until the target load is reached.
  const auto present = bench_names(2 * target + 16, seed, "in");
  for (std::size_t i = 0; filter.size() < target; ++i) {
    if (i == present.size()) throw std::runtime_error("filter cannot reach the target load");
    filter.insert(present[i]);
  }
  const auto absent = bench_names(probes, seed + 1, "out");
  std::uint64_t hits = 0;
  for (const auto& n : absent) hits += filter.contains(n);
  FilterFprPoint p;
  p.fp_bits = config.fingerprint_bits;
  p.alpha = filter.load_factor();
  p.measured = probes ? static_cast<double>(hits) / static_cast<double>(probes) : 0.0;
  p.predicted = cuckoo_fpr_bound(config.fingerprint_bits, config.bucket_slots, p.alpha);
  return p;
}

std::vector<CsvRow> fpr_rows(PitKind kind, const PitSizing& sizing, const FprResult& r) {
  const std::string impl(to_string(kind));
  const std::uint64_t entries = sizing.entries_per_port * sizing.ports;
  std::vector<CsvRow> rows{
      {impl, sizing.ports, entries, sizing.fingerprint_bits, "fp_interest_loss_rate", r.interest_loss_rate, "ratio",
       sizing.seed},
      {impl, sizing.ports, entries, sizing.fingerprint_bits, "fp_data_misforward_rate", r.data_misforward_rate,
       "ratio", sizing.seed},
      {impl, sizing.ports, entries, sizing.fingerprint_bits, "probes", static_cast<double>(r.probes), "count",
       sizing.seed},
      {impl, sizing.ports, entries, sizing.fingerprint_bits, "insert_failed", static_cast<double>(r.insert_failed),
       "count", sizing.seed},
  };
  if (kind == PitKind::DiCuPit) {
    rows.push_back({impl, sizing.ports, entries, sizing.fingerprint_bits, "summed_load", r.sum_load, "ratio",
                    sizing.seed});
  }
  return rows;
}

std::vector<FilterFprPoint> fingerprint_sweep(std::uint32_t min_bits, std::uint32_t max_bits, double alpha,
                                              const FilterConfig& base, std::uint64_t probes, std::uint64_t seed) {
  std::vector<FilterFprPoint> out;
  for (std::uint32_t f = min_bits; f <= max_bits; ++f) {
    FilterConfig c = base;
    c.fingerprint_bits = f;
    out.push_back(measure_filter_fpr(c, alpha, probes, seed));
  }
  return out;
}

std::vector<CsvRow> sweep_rows(const std::vector<FilterFprPoint>& points, const FilterConfig& base,
                               std::uint64_t seed) {
  std::vector<CsvRow> rows;
  for (const auto& p : points) {
    rows.push_back({"cuckoo", 1, base.capacity(), p.fp_bits, "filter_fpr", p.measured, "ratio", seed});
    rows.push_back({"cuckoo", 1, base.capacity(), p.fp_bits, "filter_fpr_bound", p.predicted, "ratio", seed});
    rows.push_back({"cuckoo", 1, base.capacity(), p.fp_bits, "load", p.alpha, "ratio", seed});
  }
  return rows;
}

// ---------------------------------------------------------------------------

ReplayResult replay_pit(Pit& pit, const std::vector<TraceEvent>& trace) {
  ReplayResult r;
  r.outcomes.reserve(trace.size());
  const bool track_load = dynamic_cast<const DiCuPit*>(&pit) != nullptr;
  const HashScope hs;
  for (const auto& e : trace) {
    const Timestamp16 now = Timestamp16::from_micros(e.time_us);
    EventOutcome o;
    o.kind = e.kind;
    if (e.kind == EventKind::Interest) {
      o.interest = pit.on_interest(e.name, e.interface, now);
      if (o.interest == InterestDecision::InsertFailed) ++r.insert_failed;
    } else {
      o.data = pit.on_data(e.name, now);
    }
    r.outcomes.push_back(o);
    if (track_load) r.peak_sum_load = std::max(r.peak_sum_load, summed_load(pit));
  }
  const HashCounters d = hs.delta();
  r.packet_hashes = d.packet();
  r.relocation_hashes = d.relocation;
  return r;
}

CollisionClassifier::CollisionClassifier(const std::vector<TraceEvent>& trace, const CuckooCodec& codec) {
  std::unordered_map<std::string_view, std::size_t> open;
  event_episode_.reserve(trace.size());
  for (const auto& e : trace) {
    auto it = open.find(e.name);
    if (e.kind == EventKind::Interest) {
      if (it == open.end()) {
        episodes_.push_back({e.name, e.time_us, e.time_us, false});
        it = open.emplace(e.name, episodes_.size() - 1).first;
      }
      event_episode_.push_back(it->second);
    } else {
      if (it == open.end()) {
        // Data without a pending interest: its own zero-length episode.
        episodes_.push_back({e.name, e.time_us, e.time_us, true});
        event_episode_.push_back(episodes_.size() - 1);
        continue;
      }
      Episode& ep = episodes_[it->second];
      ep.end_us = e.time_us;
      ep.closed = true;
      event_episode_.push_back(it->second);
      open.erase(it);
    }
  }
  const std::uint64_t horizon = trace.empty() ? 0 : trace.back().time_us;
  for (auto& ep : episodes_) {
    if (!ep.closed) ep.end_us = horizon;
  }

  using KeyT = std::tuple<std::uint32_t, std::uint64_t, std::uint64_t>;
  std::map<KeyT, std::vector<std::size_t>> groups;
  std::unordered_map<std::string_view, KeyT> key_cache;
  for (std::size_t i = 0; i < episodes_.size(); ++i) {
    const std::string& name = episodes_[i].name;
    auto kc = key_cache.find(name);
    if (kc == key_cache.end()) {
      const CuckooKey k = codec.key_for(name);
      const auto lo = std::min(k.buckets.first, k.buckets.second);
      const auto hi = std::max(k.buckets.first, k.buckets.second);
      kc = key_cache.emplace(name, KeyT{k.fingerprint.value, lo, hi}).first;
    }
    groups[kc->second].push_back(i);
  }
  collided_.assign(episodes_.size(), false);
  for (auto& [key, members] : groups) {
    if (members.size() < 2) continue;
    std::sort(members.begin(), members.end(),
              [&](std::size_t a, std::size_t b) { return episodes_[a].start_us < episodes_[b].start_us; });
    for (std::size_t x = 0; x < members.size(); ++x) {
      const Episode& a = episodes_[members[x]];
      for (std::size_t y = x + 1; y < members.size(); ++y) {
        const Episode& b = episodes_[members[y]];
        if (b.start_us > a.end_us) break;
        if (a.name == b.name) continue;
        collided_[members[x]] = true;
        collided_[members[y]] = true;
      }
    }
  }
}

std::size_t CollisionClassifier::collided_count() const {
  return static_cast<std::size_t>(std::count(collided_.begin(), collided_.end(), true));
}

AggregationCheck check_single_forward(const std::vector<TraceEvent>& trace, const ReplayResult& replay,
                                      const CollisionClassifier* classifier) {
  if (replay.outcomes.size() != trace.size()) throw std::invalid_argument("replay does not match the trace");
  std::unordered_map<std::string_view, std::size_t> open;
  std::vector<std::uint32_t> forwards;
  std::vector<std::size_t> ep_index;
  AggregationCheck c;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& e = trace[i];
    if (e.kind == EventKind::Interest) {
      auto it = open.find(e.name);
      if (it == open.end()) {
        it = open.emplace(e.name, forwards.size()).first;
        forwards.push_back(0);
        ep_index.push_back(classifier ? classifier->episode_of_event(i) : 0);
      }
      const InterestDecision d = replay.outcomes[i].interest;
      if (d == InterestDecision::ForwardToFib) ++forwards[it->second];
      if (d == InterestDecision::InsertFailed) ++c.insert_failed;
    } else {
      open.erase(e.name);
    }
  }
  c.episodes = forwards.size();
  for (std::size_t k = 0; k < forwards.size(); ++k) {
    if (forwards[k] == 1) {
      ++c.exact;
    } else {
      ++c.deviating;
      if (!classifier || !classifier->collided(ep_index[k])) ++c.deviating_unexplained;
    }
  }
  return c;
}

OracleDiff oracle_diff(const std::vector<TraceEvent>& trace, const PitSizing& sizing) {
  auto cuckoo = make_pit(PitKind::DiCuPit, sizing);
  OraclePit oracle(sizing.ports, sizing.interest_lifetime_ms);
  const ReplayResult a = replay_pit(*cuckoo, trace);
  const ReplayResult b = replay_pit(oracle, trace);
  const auto* d = static_cast<const DiCuPit*>(cuckoo.get());
  const CollisionClassifier classifier(trace, d->sub_tables().codec());

  OracleDiff r;
  r.events = trace.size();
  r.insert_failed = a.insert_failed;
  r.peak_sum_load = a.peak_sum_load;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (a.outcomes[i] == b.outcomes[i]) continue;
    ++r.divergent;
    if (classifier.event_collided(i)) {
      ++r.divergent_collision;
    } else {
      ++r.divergent_unexplained;
    }
  }
  r.rate = r.events ? static_cast<double>(r.divergent) / static_cast<double>(r.events) : 0.0;
  r.bound = cuckoo_fpr_bound(sizing.fingerprint_bits, sizing.bucket_slots, r.peak_sum_load);
  return r;
}

}  // namespace dicupit
