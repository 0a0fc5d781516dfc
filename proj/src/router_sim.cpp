#include "dicupit/router_sim.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace dicupit {

// ---------------------------------------------------------------------------
// Topology

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

std::uint64_t to_u64(const std::string& s, std::uint64_t lineno) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw ParseError("expected a number, got '" + s + "'", lineno);
  }
  return std::stoull(s);
}

Endpoint parse_endpoint(const std::string& s, std::uint64_t lineno) {
  const auto colon = s.rfind(':');
  if (colon == std::string::npos || colon == 0) throw ParseError("expected NODE:IFACE, got '" + s + "'", lineno);
  return {s.substr(0, colon), static_cast<std::uint32_t>(to_u64(s.substr(colon + 1), lineno))};
}

std::vector<std::string> prefix_components(const std::string& p, std::uint64_t lineno) {
  if (p == "/") return {};
  try {
    return Name::parse(p).components;
  } catch (const ParseError& e) {
    throw ParseError(e.what(), lineno);
  }
}

}  // namespace

Topology Topology::parse(std::istream& in) {
  Topology t;
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    const std::string& kw = tok[0];
    if (kw == "router") {
      if (tok.size() < 2) throw ParseError("router needs an id", lineno);
      RouterSpec r;
      r.id = tok[1];
      for (std::size_t i = 2; i < tok.size(); ++i) {
        const auto eq = tok[i].find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value, got '" + tok[i] + "'", lineno);
        const std::string key = tok[i].substr(0, eq);
        const std::uint64_t v = to_u64(tok[i].substr(eq + 1), lineno);
        if (key == "ports") {
          r.ports = static_cast<std::uint32_t>(v);
        } else if (key == "cs") {
          r.cs_capacity = v;
        } else {
          throw ParseError("unknown router option '" + key + "'", lineno);
        }
      }
      t.routers.push_back(std::move(r));
    } else if (kw == "link") {
      if (tok.size() != 3) throw ParseError("link needs two endpoints", lineno);
      t.links.emplace_back(parse_endpoint(tok[1], lineno), parse_endpoint(tok[2], lineno));
    } else if (kw == "consumer" || kw == "producer") {
      if (tok.size() != 3) throw ParseError(kw + " needs an id and an endpoint", lineno);
      (kw == "consumer" ? t.consumers : t.producers).push_back({tok[1], parse_endpoint(tok[2], lineno)});
    } else if (kw == "fib") {
      if (tok.size() != 4) throw ParseError("fib needs ROUTER PREFIX IFACE", lineno);
      auto it = std::find_if(t.routers.begin(), t.routers.end(), [&](const RouterSpec& r) { return r.id == tok[1]; });
      if (it == t.routers.end()) throw ParseError("fib for unknown router '" + tok[1] + "'", lineno);
      it->fib.push_back({prefix_components(tok[2], lineno), static_cast<std::uint32_t>(to_u64(tok[3], lineno))});
    } else {
      throw ParseError("unknown directive '" + kw + "'", lineno);
    }
  }
  t.validate();
  return t;
}

Topology Topology::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open topology file: " + path);
  try {
    return parse(in);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

const RouterSpec* Topology::router(const std::string& id) const {
  for (const auto& r : routers) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

void Topology::validate() const {
  std::map<Endpoint, std::string> used;
  auto claim = [&](const Endpoint& e, const std::string& who) {
    const RouterSpec* r = router(e.node);
    if (!r) throw std::invalid_argument(who + " references unknown router '" + e.node + "'");
    if (e.iface >= r->ports) {
      throw std::invalid_argument(who + " uses interface " + std::to_string(e.iface) + " beyond " + e.node + "'s " +
                                  std::to_string(r->ports) + " ports");
    }
    if (!used.emplace(e, who).second) {
      throw std::invalid_argument(e.node + ":" + std::to_string(e.iface) + " is attached twice");
    }
  };
  std::unordered_set<std::string> ids;
  for (const auto& r : routers) {
    if (!ids.insert(r.id).second) throw std::invalid_argument("duplicate node id '" + r.id + "'");
    if (r.ports == 0 || r.ports > InterfaceSet::kMaxInterfaces) {
      throw std::invalid_argument("router " + r.id + " needs 1..32 ports");
    }
    for (const auto& f : r.fib) {
      if (f.iface >= r.ports) throw std::invalid_argument("fib of " + r.id + " points past its ports");
    }
  }
  for (const auto& [a, b] : links) {
    claim(a, "link");
    claim(b, "link");
  }
  for (const auto& c : consumers) {
    if (!ids.insert(c.id).second) throw std::invalid_argument("duplicate node id '" + c.id + "'");
    claim(c.attach, "consumer " + c.id);
  }
  for (const auto& p : producers) {
    if (!ids.insert(p.id).second) throw std::invalid_argument("duplicate node id '" + p.id + "'");
    claim(p.attach, "producer " + p.id);
  }
}

Topology fanout_topology(std::size_t cs_capacity) {
  Topology t;
  t.routers.push_back({"R1", 8, cs_capacity, {FibEntry{{}, 0}}});
  t.consumers = {{"C1", {"R1", 1}}, {"C2", {"R1", 2}}, {"C3", {"R1", 3}}};
  t.producers = {{"P1", {"R1", 0}}};
  t.validate();
  return t;
}

std::vector<TraceEvent> fanout_trace(const std::string& name) {
  return {
      {0, 0, EventKind::Interest, name, 0},
      {1, 1000, EventKind::Interest, name, 1},
      {2, 80000, EventKind::Data, name, 0},
      {3, 90000, EventKind::Interest, name, 2},
  };
}

// ---------------------------------------------------------------------------
// CS and FIB

bool ContentStore::lookup(const std::string& name) {
  auto it = index_.find(name);
  if (it == index_.end()) return false;
  order_.splice(order_.begin(), order_, it->second);
  return true;
}

void ContentStore::insert(const std::string& name) {
  if (capacity_ == 0) return;
  if (lookup(name)) return;
  if (index_.size() == capacity_) {
    index_.erase(order_.back());
    order_.pop_back();
  }
  order_.push_front(name);
  index_.emplace(name, order_.begin());
}

std::optional<std::uint32_t> fib_lookup(const std::vector<FibEntry>& fib, const std::string& name) {
  const std::vector<std::string> comps = Name::parse(name).components;
  std::optional<std::uint32_t> best;
  std::size_t best_len = 0;
  for (const auto& e : fib) {
    if (e.prefix.size() > comps.size()) continue;
    if (!std::equal(e.prefix.begin(), e.prefix.end(), comps.begin())) continue;
    if (!best || e.prefix.size() > best_len) {
      best = e.iface;
      best_len = e.prefix.size();
    }
  }
  return best;
}

std::string_view to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::CsHit: return "cs_hit";
    case ActionKind::PitInsert: return "pit_insert";
    case ActionKind::FibForward: return "fib_forward";
    case ActionKind::Aggregated: return "aggregated";
    case ActionKind::NoRoute: return "no_route";
    case ActionKind::InsertFailed: return "insert_failed";
    case ActionKind::DataFanout: return "data_fanout";
    case ActionKind::DataNoMatch: return "data_no_match";
    case ActionKind::Delivered: return "delivered";
  }
  return "?";
}

std::string report_json(const SimReport& r, int indent) {
  nlohmann::ordered_json j;
  j["interests"] = r.interests;
  j["data_events"] = r.data_events;
  j["delivered"] = r.delivered;
  j["aggregated"] = r.aggregated;
  j["forwarded"] = r.forwarded;
  j["cs_hits"] = r.cs_hits;
  j["dropped_fp"] = r.dropped_fp;
  j["dropped_no_route"] = r.dropped_no_route;
  j["dropped_insert_failed"] = r.dropped_insert_failed;
  j["unanswered_data"] = r.unanswered_data;
  j["misdelivered"] = r.misdelivered;
  auto occ = nlohmann::ordered_json::array();
  for (const auto& s : r.occupancy) occ.push_back({{"seq", s.seq}, {"entries", s.entries}});
  j["pit_occupancy"] = std::move(occ);
  return j.dump(indent);
}

// ---------------------------------------------------------------------------
// Simulation

namespace {
constexpr int kMaxHops = 64;
}

Simulation::Simulation(const Topology& topology, const SimConfig& config) : topo_(topology), config_(config) {
  topo_.validate();
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < topo_.routers.size(); ++i) {
    const RouterSpec& spec = topo_.routers[i];
    PitSizing s = config_.sizing;
    s.ports = spec.ports;
    routers_.push_back({&spec, make_pit(config_.pit, s), ContentStore(spec.cs_capacity)});
    index.emplace(spec.id, i);
  }
  for (const auto& [a, b] : topo_.links) {
    peers_[a] = Peer{Peer::Kind::Router, index.at(b.node), b.iface};
    peers_[b] = Peer{Peer::Kind::Router, index.at(a.node), a.iface};
  }
  for (std::size_t c = 0; c < topo_.consumers.size(); ++c) peers_[topo_.consumers[c].attach] = {Peer::Kind::Consumer, c, 0};
  for (std::size_t p = 0; p < topo_.producers.size(); ++p) peers_[topo_.producers[p].attach] = {Peer::Kind::Producer, p, 0};
  consumer_pending_.resize(topo_.consumers.size());
  producer_pending_.resize(topo_.producers.size());
}

const Pit& Simulation::pit(const std::string& router) const {
  for (const auto& r : routers_) {
    if (r.spec->id == router) return *r.pit;
  }
  throw std::out_of_range("unknown router '" + router + "'");
}

std::optional<Simulation::Peer> Simulation::peer_of(std::size_t router, std::uint32_t iface) const {
  auto it = peers_.find(Endpoint{routers_[router].spec->id, iface});
  if (it == peers_.end()) return std::nullopt;
  return it->second;
}

void Simulation::log(const std::string& node, ActionKind kind, InterfaceSet s) {
  if (config_.record_actions) actions_.push_back({seq_, node, kind, s});
}

void Simulation::interest_at(std::size_t r, std::uint32_t iface, const std::string& name, Timestamp16 now, int depth) {
  RouterState& router = routers_[r];
  const std::string& id = router.spec->id;
  if (depth > kMaxHops) {
    ++report_.dropped_no_route;
    log(id, ActionKind::NoRoute);
    return;
  }
  if (router.cs.lookup(name)) {
    ++report_.cs_hits;
    log(id, ActionKind::CsHit, InterfaceSet{iface});
    emit_data(r, iface, name, now, depth + 1);
    return;
  }
  switch (router.pit->on_interest(name, iface, now)) {
    case InterestDecision::Aggregated:
      ++report_.aggregated;
      log(id, ActionKind::Aggregated, InterfaceSet{iface});
      return;
    case InterestDecision::InsertFailed:
      ++report_.dropped_insert_failed;
      log(id, ActionKind::InsertFailed, InterfaceSet{iface});
      return;
    case InterestDecision::ForwardToFib: break;
  }
  log(id, ActionKind::PitInsert, InterfaceSet{iface});
  const auto out = fib_lookup(router.spec->fib, name);
  if (!out) {
    ++report_.dropped_no_route;
    log(id, ActionKind::NoRoute);
    return;
  }
  ++report_.forwarded;
  log(id, ActionKind::FibForward, InterfaceSet{*out});
  const auto peer = peer_of(r, *out);
  if (!peer) return;
  switch (peer->kind) {
    case Peer::Kind::Router: interest_at(peer->index, peer->iface, name, now, depth + 1); break;
    case Peer::Kind::Producer: producer_pending_[peer->index].insert(name); break;
    case Peer::Kind::Consumer: break;
  }
}

void Simulation::data_at(std::size_t r, std::uint32_t, const std::string& name, Timestamp16 now, int depth) {
  RouterState& router = routers_[r];
  const std::string& id = router.spec->id;
  router.cs.insert(name);
  const DataDecision d = router.pit->on_data(name, now);
  if (!d.forwarded()) {
    ++report_.dropped_fp;
    log(id, ActionKind::DataNoMatch);
    return;
  }
  log(id, ActionKind::DataFanout, d.interfaces);
  for (std::uint32_t i : d.interfaces.to_vector()) emit_data(r, i, name, now, depth + 1);
}

void Simulation::emit_data(std::size_t r, std::uint32_t iface, const std::string& name, Timestamp16 now, int depth) {
  const auto peer = peer_of(r, iface);
  if (!peer || depth > kMaxHops) {
    ++report_.misdelivered;
    return;
  }
  switch (peer->kind) {
    case Peer::Kind::Router: data_at(peer->index, peer->iface, name, now, depth); break;
    case Peer::Kind::Consumer:
      if (consumer_pending_[peer->index].erase(name)) {
        ++report_.delivered;
        log(topo_.consumers[peer->index].id, ActionKind::Delivered);
      } else {
        ++report_.misdelivered;
      }
      break;
    case Peer::Kind::Producer: ++report_.misdelivered; break;
  }
}

void Simulation::step(const TraceEvent& e) {
  seq_ = e.seq;
  if (last_time_ && e.time_us < *last_time_) throw TraceError("time goes backwards", e.seq);
  last_time_ = e.time_us;
  const Timestamp16 now = Timestamp16::from_micros(e.time_us);

  if (e.kind == EventKind::Interest) {
    if (e.interface >= consumer_pending_.size()) {
      throw TraceError("interface " + std::to_string(e.interface) + " has no consumer", e.seq);
    }
    ++report_.interests;
    requested_.insert(e.name);
    consumer_pending_[e.interface].insert(e.name);
    const Endpoint& at = topo_.consumers[e.interface].attach;
    const auto r = static_cast<std::size_t>(topo_.router(at.node) - topo_.routers.data());
    interest_at(r, at.iface, e.name, now, 0);
  } else {
    if (!requested_.count(e.name)) throw TraceError("data for '" + e.name + "' precedes any interest", e.seq);
    ++report_.data_events;
    bool answered = false;
    for (std::size_t p = 0; p < producer_pending_.size(); ++p) {
      if (!producer_pending_[p].erase(e.name)) continue;
      answered = true;
      const Endpoint& at = topo_.producers[p].attach;
      const auto r = static_cast<std::size_t>(topo_.router(at.node) - topo_.routers.data());
      data_at(r, at.iface, e.name, now, 0);
    }
    if (!answered) ++report_.unanswered_data;
  }

  ++events_;
  if (config_.sample_every != 0 && events_ % config_.sample_every == 0) {
    std::uint64_t entries = 0;
    for (const auto& rs : routers_) entries += rs.pit->size();
    report_.occupancy.push_back({e.seq, entries});
  }
}

void Simulation::run(const std::vector<TraceEvent>& trace) {
  for (const auto& e : trace) step(e);
}

SimReport run_scenario(const Topology& topology, const std::vector<TraceEvent>& trace, const SimConfig& config) {
  Simulation sim(topology, config);
  sim.run(trace);
  return sim.report();
}

}  // namespace dicupit
