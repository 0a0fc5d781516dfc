#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dicupit {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::uint64_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::uint64_t line() const { return line_; }

 private:
  std::uint64_t line_;
};

/// Hierarchical name; rendered as components joined by "/" (no leading slash).
struct Name {
  static constexpr std::size_t kMaxRenderedBytes = 8192;

  std::vector<std::string> components;

  /// Accepts an optional leading "/". Throws ParseError on empty components,
  /// invalid UTF-8, or oversize input.
  static Name parse(std::string_view text);
  std::string rendered() const;
  friend bool operator==(const Name&, const Name&) = default;
};

bool valid_utf8(std::string_view s);

/// One rendered name per line; blank lines skipped; duplicates dropped
/// keeping the first occurrence.
std::vector<std::string> load_names(std::istream& in);
std::vector<std::string> load_names_file(const std::string& path);

struct NameCorpus {
  std::vector<std::string> names;  // rendered, distinct
  std::vector<double> weights;     // popularity, sums to 1
};

/// Zipf weights proportional to 1 / rank^s; s = 0 is uniform.
std::vector<double> zipf_weights(std::size_t n, double s);

/// Deterministic URL-like names with 2 to 8 components.
NameCorpus gen_names(std::size_t count, double zipf_s, std::uint64_t seed);

/// Inverse-CDF sampler over a weight table.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(const std::vector<double>& weights);
  std::size_t operator()(std::mt19937_64& rng) const;

 private:
  std::vector<double> cdf_;
};

/// Uniform integer in [0, n) from one 64-bit draw.
std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n);
/// Uniform double in [0, 1) from one 64-bit draw.
double uniform_unit(std::mt19937_64& rng);

enum class EventKind { Interest, Data };

struct TraceEvent {
  std::uint64_t seq = 0;
  std::uint64_t time_us = 0;
  EventKind kind = EventKind::Interest;
  std::string name;
  std::uint32_t interface = 0;  // Interest only

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct WorkloadSpec {
  std::uint32_t ports = 8;
  std::uint64_t num_interests = 10000;  // first-time interests; duplicates and Data come on top
  double rate_per_port = 1e5;           // interests per second per port
  std::uint64_t rtt_us = 80000;
  double dup_prob = 0.0;
  double zipf_s = 0.9;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Interests arrive on every port at a fixed spacing (ports phase-shifted),
/// names drawn by popularity among those not currently pending. With
/// probability dup_prob the name re-arrives on another port before its Data.
/// Each first interest gets one Data at time + rtt. At equal times Data
/// precedes Interests.
std::vector<TraceEvent> gen_trace(const NameCorpus& corpus, const WorkloadSpec& spec);

/// Rough number of interests giving `events` total events.
std::uint64_t interests_for_events(std::uint64_t events, double dup_prob);

class TraceError : public std::runtime_error {
 public:
  TraceError(const std::string& what, std::uint64_t seq)
      : std::runtime_error("event " + std::to_string(seq) + ": " + what), seq_(seq) {}
  std::uint64_t seq() const { return seq_; }

 private:
  std::uint64_t seq_;
};

/// CSV with header `seq,time_us,kind,name,interface` (RFC 4180 quoting).
void write_trace_csv(std::ostream& out, const std::vector<TraceEvent>& events);
/// Throws ParseError with the line number on malformed input.
std::vector<TraceEvent> read_trace_csv(std::istream& in);

}  // namespace dicupit
