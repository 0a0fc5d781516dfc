#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dicupit/cuckoo.hpp"
#include "dicupit/pit.hpp"
#include "dicupit/pit_factory.hpp"
#include "dicupit/workload.hpp"

namespace dicupit {

struct CsvRow {
  std::string impl;
  std::uint32_t ports = 0;
  std::uint64_t entries = 0;
  std::uint32_t fp_bits = 0;
  std::string metric;
  double value = 0;
  std::string unit;
  std::uint64_t seed = 0;
};

inline constexpr const char* kCsvHeader = "impl,ports,entries,fp_bits,metric,value,unit,seed";
void write_csv(std::ostream& out, const std::vector<CsvRow>& rows);
/// Shortest round-trip representation; integers print without a fraction.
std::string format_value(double v);

// ---------------------------------------------------------------------------
// Memory

std::vector<double> default_rates();  // 10, 20, ..., 100

/// Analytic rows per implementation and rate, followed by mean improvement rows.
std::vector<CsvRow> cmd_memory(const std::vector<double>& rates, const MemoryModelParams& params, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Lookup timing

struct LookupResult {
  PitKind kind = PitKind::DiCuPit;
  std::uint64_t names = 0;
  double mean_ns = 0;  // median over runs of batch mean
  double p99_ns = 0;   // median over runs
  double hashes_per_op = 0;
  double probes_per_op = 0;
  std::uint64_t memory_bits = 0;
  std::uint64_t insert_failed = 0;
  std::vector<double> run_means;
};

struct LookupParams {
  PitSizing sizing;            // entries_per_port derived from the name count
  std::uint64_t lookups = 200000;
  std::uint32_t runs = 5;
  std::uint64_t p99_samples = 50000;
};

/// Synthetic names "<prefix>/<i>/..." cheap enough for millions of entries.
std::vector<std::string> bench_names(std::uint64_t count, std::uint64_t seed, std::string_view prefix);

/// Inserts `present` round-robin over ports, then times data-side lookups
/// alternating present and absent names.
LookupResult run_lookup(PitKind kind, const std::vector<std::string>& present, const std::vector<std::string>& absent,
                        const LookupParams& params);

std::vector<CsvRow> lookup_rows(const LookupResult& result, const PitSizing& sizing);

// ---------------------------------------------------------------------------
// False positives

struct FprResult {
  std::uint64_t inserted = 0;
  std::uint64_t insert_failed = 0;
  std::uint64_t probes = 0;
  double interest_loss_rate = 0;     // absent name would be aggregated
  double data_misforward_rate = 0;   // absent name's data finds interfaces
  double sum_load = 0;               // summed per-table load (DiCuPIT only)
};

/// Throws std::invalid_argument if the two sets share a name.
FprResult run_fpr(PitKind kind, const PitSizing& sizing, const std::vector<std::string>& present,
                  const std::vector<std::string>& absent);

/// 1 - (1 - 2^-f)^(2 b alpha): chance an absent key matches some slot.
double cuckoo_fpr_bound(std::uint32_t fp_bits, std::uint32_t bucket_slots, double alpha);

struct FilterFprPoint {
  std::uint32_t fp_bits = 0;
  double alpha = 0;
  double measured = 0;
  double predicted = 0;
};

/// Fills a single cuckoo filter to `alpha` (refused inserts are skipped) and
/// probes with absent names.
FilterFprPoint measure_filter_fpr(const FilterConfig& config, double alpha, std::uint64_t probes, std::uint64_t seed);

std::vector<CsvRow> fpr_rows(PitKind kind, const PitSizing& sizing, const FprResult& result);

/// Filter FPR at `alpha` for each fingerprint width in [min_bits, max_bits].
std::vector<FilterFprPoint> fingerprint_sweep(std::uint32_t min_bits, std::uint32_t max_bits, double alpha,
                                              const FilterConfig& base, std::uint64_t probes, std::uint64_t seed);
std::vector<CsvRow> sweep_rows(const std::vector<FilterFprPoint>& points, const FilterConfig& base,
                               std::uint64_t seed);

// ---------------------------------------------------------------------------
// Trace replay against a PIT and collision accounting

struct EventOutcome {
  EventKind kind = EventKind::Interest;
  InterestDecision interest = InterestDecision::ForwardToFib;
  DataDecision data;
  friend bool operator==(const EventOutcome&, const EventOutcome&) = default;
};

struct ReplayResult {
  std::vector<EventOutcome> outcomes;
  std::uint64_t packet_hashes = 0;
  std::uint64_t relocation_hashes = 0;
  std::uint64_t insert_failed = 0;
  double peak_sum_load = 0;  // DiCuPIT: max over time of summed sub-table load
};

/// Feeds trace events straight to the PIT; trace interface = PIT interface.
ReplayResult replay_pit(Pit& pit, const std::vector<TraceEvent>& trace);

struct Episode {
  std::string name;
  std::uint64_t start_us = 0;
  std::uint64_t end_us = 0;
  bool closed = false;
};

/// Episodes (first interest to data) of every name in a trace and, for each
/// event, the episode it belongs to. Two episodes collide when their names
/// differ, their cuckoo keys (fingerprint and bucket pair) are identical and
/// their time spans overlap.
class CollisionClassifier {
 public:
  CollisionClassifier(const std::vector<TraceEvent>& trace, const CuckooCodec& codec);

  std::size_t episode_count() const { return episodes_.size(); }
  const Episode& episode(std::size_t i) const { return episodes_[i]; }
  std::size_t episode_of_event(std::size_t event_index) const { return event_episode_[event_index]; }
  bool collided(std::size_t episode) const { return collided_[episode]; }
  bool event_collided(std::size_t event_index) const { return collided_[event_episode_[event_index]]; }
  std::size_t collided_count() const;

 private:
  std::vector<Episode> episodes_;
  std::vector<std::size_t> event_episode_;
  std::vector<bool> collided_;
};

struct AggregationCheck {
  std::uint64_t episodes = 0;
  std::uint64_t exact = 0;            // exactly one ForwardToFib
  std::uint64_t deviating = 0;
  std::uint64_t deviating_unexplained = 0;
  std::uint64_t insert_failed = 0;
};

/// Counts ForwardToFib decisions per episode.
AggregationCheck check_single_forward(const std::vector<TraceEvent>& trace, const ReplayResult& replay,
                                      const CollisionClassifier* classifier);

struct OracleDiff {
  std::uint64_t events = 0;
  std::uint64_t divergent = 0;
  std::uint64_t divergent_collision = 0;
  std::uint64_t divergent_unexplained = 0;
  std::uint64_t insert_failed = 0;
  double peak_sum_load = 0;
  double rate = 0;   // divergent / events
  double bound = 0;  // cuckoo_fpr_bound at peak summed load
};

/// Replays the trace on DiCuPIT and the exact reference PIT and classifies
/// every event where their decisions differ.
OracleDiff oracle_diff(const std::vector<TraceEvent>& trace, const PitSizing& sizing);

}  // namespace dicupit
