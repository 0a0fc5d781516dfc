#pragma once

#include <cstdint>
#include <iosfwd>
#include <list>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dicupit/pit.hpp"
#include "dicupit/pit_factory.hpp"
#include "dicupit/workload.hpp"

namespace dicupit {

struct Endpoint {
  std::string node;
  std::uint32_t iface = 0;
  friend auto operator<=>(const Endpoint&, const Endpoint&) = default;
};

struct FibEntry {
  std::vector<std::string> prefix;  // empty = default route
  std::uint32_t iface = 0;
};

struct RouterSpec {
  std::string id;
  std::uint32_t ports = 8;
  std::size_t cs_capacity = 1000;
  std::vector<FibEntry> fib;
};

struct AppSpec {
  std::string id;
  Endpoint attach;
};

/// Static topology. Text format, one directive per line ('#' comments):
///   router R1 ports=8 cs=1000
///   link R1:4 R2:0
///   consumer C1 R1:1
///   producer P1 R2:5
///   fib R1 /razi/ac 4
struct Topology {
  std::vector<RouterSpec> routers;
  std::vector<std::pair<Endpoint, Endpoint>> links;
  std::vector<AppSpec> consumers;
  std::vector<AppSpec> producers;

  static Topology parse(std::istream& in);
  static Topology load(const std::string& path);
  /// Throws std::invalid_argument on dangling references or reused interfaces.
  void validate() const;
  const RouterSpec* router(const std::string& id) const;
};

/// Three consumers on R1 interfaces 1..3 and one producer on interface 0.
Topology fanout_topology(std::size_t cs_capacity = 1000);

/// Bounded LRU set of cached names.
class ContentStore {
 public:
  explicit ContentStore(std::size_t capacity) : capacity_(capacity) {}
  bool lookup(const std::string& name);
  void insert(const std::string& name);
  std::size_t size() const { return index_.size(); }
  std::size_t capacity() const { return capacity_; }

 private:
  std::size_t capacity_;
  std::list<std::string> order_;  // front = most recent
  std::unordered_map<std::string, std::list<std::string>::iterator> index_;
};

std::optional<std::uint32_t> fib_lookup(const std::vector<FibEntry>& fib, const std::string& name);

enum class ActionKind { CsHit, PitInsert, FibForward, Aggregated, NoRoute, InsertFailed, DataFanout, DataNoMatch, Delivered };

std::string_view to_string(ActionKind kind);

struct SimAction {
  std::uint64_t seq = 0;
  std::string node;
  ActionKind kind = ActionKind::PitInsert;
  InterfaceSet interfaces;
};

struct OccupancySample {
  std::uint64_t seq = 0;
  std::uint64_t entries = 0;
  friend bool operator==(const OccupancySample&, const OccupancySample&) = default;
};

struct SimReport {
  std::uint64_t interests = 0;
  std::uint64_t data_events = 0;
  std::uint64_t delivered = 0;
  std::uint64_t aggregated = 0;
  std::uint64_t forwarded = 0;
  std::uint64_t cs_hits = 0;
  std::uint64_t dropped_fp = 0;
  std::uint64_t dropped_no_route = 0;
  std::uint64_t dropped_insert_failed = 0;
  std::uint64_t unanswered_data = 0;
  std::uint64_t misdelivered = 0;
  std::vector<OccupancySample> occupancy;

  friend bool operator==(const SimReport&, const SimReport&) = default;
};

std::string report_json(const SimReport& report, int indent = 2);

struct SimConfig {
  PitKind pit = PitKind::DiCuPit;
  PitSizing sizing;                  // ports overridden per router
  std::uint64_t sample_every = 1000;  // occupancy sample period in events; 0 disables
  bool record_actions = false;
};

/// Zero-latency event replay. Trace interface j names consumer j (in
/// declaration order). A trace Data event is answered by every producer
/// holding an outstanding request for the name.
class Simulation {
 public:
  Simulation(const Topology& topology, const SimConfig& config);

  void step(const TraceEvent& event);
  void run(const std::vector<TraceEvent>& trace);

  const SimReport& report() const { return report_; }
  const std::vector<SimAction>& actions() const { return actions_; }
  const Pit& pit(const std::string& router) const;

 private:
  struct RouterState {
    const RouterSpec* spec;
    std::unique_ptr<Pit> pit;
    ContentStore cs;
  };
  struct Peer {
    enum class Kind { Router, Consumer, Producer } kind;
    std::size_t index;
    std::uint32_t iface;  // on the peer router
  };

  void interest_at(std::size_t router, std::uint32_t iface, const std::string& name, Timestamp16 now, int depth);
  void data_at(std::size_t router, std::uint32_t iface, const std::string& name, Timestamp16 now, int depth);
  void emit_data(std::size_t router, std::uint32_t iface, const std::string& name, Timestamp16 now, int depth);
  void log(const std::string& node, ActionKind kind, InterfaceSet s = {});
  std::optional<Peer> peer_of(std::size_t router, std::uint32_t iface) const;

  Topology topo_;
  SimConfig config_;
  std::vector<RouterState> routers_;
  std::map<Endpoint, Peer> peers_;
  std::vector<std::unordered_set<std::string>> consumer_pending_;
  std::vector<std::unordered_set<std::string>> producer_pending_;
  std::unordered_set<std::string> requested_;
  SimReport report_;
  std::vector<SimAction> actions_;
  std::uint64_t seq_ = 0;
  std::uint64_t events_ = 0;
  std::optional<std::uint64_t> last_time_;
};

SimReport run_scenario(const Topology& topology, const std::vector<TraceEvent>& trace, const SimConfig& config);

/// Fan-out trace: C1 and C2 request the same name, Data returns, then C3
/// requests it again.
std::vector<TraceEvent> fanout_trace(const std::string& name = "razi/ac/ir/eng/computer-engineering.html");

}  // namespace dicupit
