#include "dicupit/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "dicupit/hashing.hpp"

namespace dicupit {

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xe0) == 0xc0) {
      len = 2;
      cp = c & 0x1f;
    } else if ((c & 0xf0) == 0xe0) {
      len = 3;
      cp = c & 0x0f;
    } else if ((c & 0xf8) == 0xf0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > s.size()) return false;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xc0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3f);
    }
    static constexpr std::uint32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMin[len] || cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) return false;
    i += len;
  }
  return true;
}

Name Name::parse(std::string_view text) {
  if (text.size() > kMaxRenderedBytes) throw ParseError("name longer than 8 KiB");
  if (!valid_utf8(text)) throw ParseError("name is not valid UTF-8");
  if (!text.empty() && text.front() == '/') text.remove_prefix(1);
  if (text.empty()) throw ParseError("empty name");
  Name n;
  std::size_t start = 0;
  for (;;) {
    const std::size_t slash = text.find('/', start);
    const std::string_view comp = text.substr(start, slash == std::string_view::npos ? slash : slash - start);
    if (comp.empty()) throw ParseError("empty name component");
    n.components.emplace_back(comp);
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  return n;
}

std::string Name::rendered() const {
  std::string out;
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (i) out += '/';
    out += components[i];
  }
  return out;
}

std::vector<std::string> load_names(std::istream& in) {
  std::vector<std::string> names;
  std::unordered_set<std::string> seen;
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string rendered;
    try {
      rendered = Name::parse(line).rendered();
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
    if (seen.insert(rendered).second) names.push_back(std::move(rendered));
  }
  return names;
}

std::vector<std::string> load_names_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open name file: " + path);
  try {
    return load_names(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) { return reduce_range(rng(), n); }

double uniform_unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<double> zipf_weights(std::size_t n, double s) {
  std::vector<double> w(n);
  double total = 0;
  for (std::size_t r = 0; r < n; ++r) {
    w[r] = 1.0 / std::pow(static_cast<double>(r + 1), s);
    total += w[r];
  }
  for (auto& x : w) x /= total;
  return w;
}

DiscreteSampler::DiscreteSampler(const std::vector<double>& weights) : cdf_(weights.size()) {
  if (weights.empty()) throw std::invalid_argument("sampler needs at least one weight");
  std::partial_sum(weights.begin(), weights.end(), cdf_.begin());
  const double total = cdf_.back();
  for (auto& c : cdf_) c /= total;
  cdf_.back() = 1.0;
}

std::size_t DiscreteSampler::operator()(std::mt19937_64& rng) const {
  const double u = uniform_unit(rng);
  return static_cast<std::size_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
}

namespace {

constexpr std::string_view kAlphabet = "abcdefghijklmnopqrstuvwxyz0123456789";
constexpr std::string_view kTlds[] = {"com", "org", "net", "edu", "ir", "io", "de", "jp"};
constexpr std::string_view kExts[] = {".html", ".mp4", ".jpg", ".json", ".txt", ""};

std::string random_word(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  const std::size_t len = lo + uniform_index(rng, hi - lo + 1);
  std::string w(len, 'a');
  for (auto& c : w) c = kAlphabet[uniform_index(rng, 26)];
  if (len > 3 && uniform_index(rng, 4) == 0) w[len - 1] = kAlphabet[26 + uniform_index(rng, 10)];
  return w;
}

std::string random_name(std::mt19937_64& rng) {
  const std::size_t comps = 2 + uniform_index(rng, 7);
  std::string out = random_word(rng, 3, 10);
  out += '/';
  out += kTlds[uniform_index(rng, std::size(kTlds))];
  for (std::size_t i = 2; i < comps; ++i) {
    out += '/';
    out += random_word(rng, 2, 12);
    if (i + 1 == comps) out += kExts[uniform_index(rng, std::size(kExts))];
  }
  return out;
}

}  // namespace

NameCorpus gen_names(std::size_t count, double zipf_s, std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("gen_names: count must be at least 1");
  if (zipf_s < 0) throw std::invalid_argument("gen_names: zipf_s must be non-negative");
  std::mt19937_64 rng(seed);
  NameCorpus corpus;
  corpus.names.reserve(count);
  std::unordered_set<std::string> seen;
  seen.reserve(count * 2);
  while (corpus.names.size() < count) {
    std::string n = random_name(rng);
    if (seen.insert(n).second) corpus.names.push_back(std::move(n));
  }
  corpus.weights = zipf_weights(count, zipf_s);
  return corpus;
}

void WorkloadSpec::validate() const {
  if (ports == 0 || ports > 32) throw std::invalid_argument("ports must be in [1, 32]");
  if (!(rate_per_port > 0)) throw std::invalid_argument("rate_per_port must be positive");
  if (rtt_us == 0) throw std::invalid_argument("rtt_us must be positive");
  if (!(dup_prob >= 0 && dup_prob <= 1)) throw std::invalid_argument("dup_prob must be in [0, 1]");
  if (zipf_s < 0) throw std::invalid_argument("zipf_s must be non-negative");
}

std::uint64_t interests_for_events(std::uint64_t events, double dup_prob) {
  return static_cast<std::uint64_t>(std::ceil(static_cast<double>(events) / (2.0 + dup_prob)));
}

std::vector<TraceEvent> gen_trace(const NameCorpus& corpus, const WorkloadSpec& spec) {
  spec.validate();
  if (corpus.names.empty()) throw std::invalid_argument("gen_trace: empty name corpus");
  std::vector<double> weights = corpus.weights;
  if (weights.size() != corpus.names.size()) weights = zipf_weights(corpus.names.size(), spec.zipf_s);
  const DiscreteSampler sample(weights);
  std::mt19937_64 rng(spec.seed);

  const double interval = 1e6 / spec.rate_per_port;
  std::vector<std::uint64_t> pending_until(corpus.names.size(), 0);

  struct Raw {
    std::uint64_t time;
    int order;  // 0 Data, 1 Interest
    std::uint64_t ordinal;
    std::uint32_t name;
    std::uint32_t iface;
  };
  std::vector<Raw> raw;
  raw.reserve(static_cast<std::size_t>(spec.num_interests * (2 + spec.dup_prob) + 16));
  std::uint64_t ordinal = 0;

  for (std::uint64_t g = 0; g < spec.num_interests; ++g) {
    const auto port = static_cast<std::uint32_t>(g % spec.ports);
    const std::uint64_t j = g / spec.ports;
    const auto t = static_cast<std::uint64_t>((static_cast<double>(j) + static_cast<double>(port) / spec.ports) * interval);

    std::size_t pick = sample(rng);
    for (int tries = 0; pending_until[pick] > t && tries < 16; ++tries) pick = sample(rng);
    if (pending_until[pick] > t) {
      const std::size_t start = uniform_index(rng, corpus.names.size());
      std::size_t k = 0;
      for (; k < corpus.names.size(); ++k) {
        const std::size_t c = (start + k) % corpus.names.size();
        if (pending_until[c] <= t) {
          pick = c;
          break;
        }
      }
      if (k == corpus.names.size()) {
        throw std::invalid_argument("gen_trace: every name is pending; use a larger corpus");
      }
    }
    const std::uint64_t data_time = t + spec.rtt_us;
    pending_until[pick] = data_time;
    const auto name = static_cast<std::uint32_t>(pick);
    raw.push_back({t, 1, ordinal++, name, port});
    if (spec.ports > 1 && uniform_unit(rng) < spec.dup_prob) {
      auto other = static_cast<std::uint32_t>(uniform_index(rng, spec.ports - 1));
      if (other >= port) ++other;
      raw.push_back({t + uniform_index(rng, spec.rtt_us), 1, ordinal++, name, other});
    }
    raw.push_back({data_time, 0, ordinal++, name, 0});
  }

  std::sort(raw.begin(), raw.end(), [](const Raw& a, const Raw& b) {
    if (a.time != b.time) return a.time < b.time;
    if (a.order != b.order) return a.order < b.order;
    return a.ordinal < b.ordinal;
  });

  std::vector<TraceEvent> events;
  events.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const Raw& r = raw[i];
    events.push_back({i, r.time, r.order == 0 ? EventKind::Data : EventKind::Interest, corpus.names[r.name],
                      r.order == 0 ? 0U : r.iface});
  }
  return events;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

void write_field(std::ostream& out, std::string_view v) {
  if (v.find_first_of(",\"\r\n") == std::string_view::npos) {
    out << v;
    return;
  }
  out << '"';
  for (char c : v) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

std::vector<std::string> split_csv(const std::string& line, std::uint64_t lineno) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          fields.back() += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        fields.back() += c;
      }
    } else if (c == '"' && fields.back().empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", lineno);
  return fields;
}

std::uint64_t parse_u64(const std::string& s, std::uint64_t lineno, const char* what) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw ParseError(std::string("bad ") + what + " '" + s + "'", lineno);
  }
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw ParseError(std::string(what) + " out of range", lineno);
  }
}

}  // namespace

void write_trace_csv(std::ostream& out, const std::vector<TraceEvent>& events) {
  out << "seq,time_us,kind,name,interface\n";
  for (const auto& e : events) {
    out << e.seq << ',' << e.time_us << ',' << (e.kind == EventKind::Interest ? 'I' : 'D') << ',';
    write_field(out, e.name);
    out << ',';
    if (e.kind == EventKind::Interest) out << e.interface;
    out << '\n';
  }
}

std::vector<TraceEvent> read_trace_csv(std::istream& in) {
  std::vector<TraceEvent> events;
  std::string line;
  std::uint64_t lineno = 0;
  if (!std::getline(in, line)) return events;
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "seq,time_us,kind,name,interface") throw ParseError("unexpected trace header '" + line + "'", lineno);
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv(line, lineno);
    if (f.size() != 5) throw ParseError("expected 5 fields, got " + std::to_string(f.size()), lineno);
    TraceEvent e;
    e.seq = parse_u64(f[0], lineno, "seq");
    e.time_us = parse_u64(f[1], lineno, "time_us");
    if (f[2] == "I") {
      e.kind = EventKind::Interest;
      const std::uint64_t iface = parse_u64(f[4], lineno, "interface");
      if (iface >= 32) throw ParseError("interface out of range", lineno);
      e.interface = static_cast<std::uint32_t>(iface);
    } else if (f[2] == "D") {
      e.kind = EventKind::Data;
      if (!f[4].empty()) throw ParseError("data rows carry no interface", lineno);
    } else {
      throw ParseError("kind must be I or D", lineno);
    }
    try {
      e.name = Name::parse(f[3]).rendered();
    } catch (const ParseError& err) {
      throw ParseError(err.what(), lineno);
    }
    events.push_back(std::move(e));
  }
  return events;
}

}  // namespace dicupit
