#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dicupit/bench.hpp"
#include "dicupit/bloom.hpp"
#include "dicupit/cuckoo.hpp"
#include "dicupit/router_sim.hpp"

namespace py = pybind11;
using namespace dicupit;

namespace {

Timestamp16 at_ms(std::uint64_t ms) { return Timestamp16::from_micros(ms * 1000); }

py::object data_result(const DataDecision& d) {
  if (!d.forwarded()) return py::none();
  return py::cast(d.interfaces.to_vector());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cuckoo-filter pending interest table and baselines";

  py::class_<FilterConfig>(m, "FilterConfig")
      .def(py::init([](std::uint64_t buckets, std::uint32_t slots, std::uint32_t fp_bits, std::uint32_t max_kicks,
                       std::uint32_t seed) {
             FilterConfig c{buckets, slots, fp_bits, max_kicks, seed};
             c.validate();
             return c;
           }),
           py::arg("num_buckets") = 1024, py::arg("bucket_slots") = 4, py::arg("fingerprint_bits") = 6,
           py::arg("max_kicks") = 150, py::arg("seed") = 0)
      .def_readonly("num_buckets", &FilterConfig::num_buckets)
      .def_readonly("bucket_slots", &FilterConfig::bucket_slots)
      .def_readonly("fingerprint_bits", &FilterConfig::fingerprint_bits)
      .def_readonly("max_kicks", &FilterConfig::max_kicks)
      .def_readonly("seed", &FilterConfig::seed)
      .def_property_readonly("capacity", &FilterConfig::capacity);

  m.def("fingerprint_of", [](std::string_view name, const FilterConfig& c) { return fingerprint_of(name, c).value; });
  m.def("candidate_buckets", [](std::string_view name, const FilterConfig& c) {
    const auto b = candidate_buckets(name, c);
    return py::make_tuple(b.first, b.second);
  });
  m.def("alt_bucket", [](std::uint64_t index, std::uint32_t fp, const FilterConfig& c) {
    return alt_bucket(index, Fingerprint{fp}, c);
  });

  py::class_<CuckooFilter>(m, "CuckooFilter")
      .def(py::init<const FilterConfig&>())
      .def("insert", [](CuckooFilter& f, std::string_view n) { return f.insert(n).stored(); })
      .def("contains", &CuckooFilter::contains)
      .def("__contains__", &CuckooFilter::contains)
      .def("erase", &CuckooFilter::erase)
      .def("__len__", &CuckooFilter::size)
      .def_property_readonly("capacity", &CuckooFilter::capacity)
      .def_property_readonly("load_factor", &CuckooFilter::load_factor);

  m.def("bloom_fpp", &bloom_fpp, py::arg("n"), py::arg("m"), py::arg("k"));
  m.def("cuckoo_fpr_bound", &cuckoo_fpr_bound, py::arg("fp_bits"), py::arg("bucket_slots"), py::arg("alpha"));

  py::class_<PitSizing>(m, "PitSizing")
      .def(py::init<>())
      .def_readwrite("ports", &PitSizing::ports)
      .def_readwrite("entries_per_port", &PitSizing::entries_per_port)
      .def_readwrite("num_buckets", &PitSizing::num_buckets)
      .def_readwrite("bucket_slots", &PitSizing::bucket_slots)
      .def_readwrite("fingerprint_bits", &PitSizing::fingerprint_bits)
      .def_readwrite("max_kicks", &PitSizing::max_kicks)
      .def_readwrite("global_multiplier", &PitSizing::global_multiplier)
      .def_readwrite("interest_lifetime_ms", &PitSizing::interest_lifetime_ms)
      .def_readwrite("seed", &PitSizing::seed);

  py::class_<Pit>(m, "Pit")
      .def_property_readonly("kind", [](const Pit& p) { return std::string(p.kind()); })
      .def_property_readonly("ports", &Pit::ports)
      .def(
          "on_interest",
          [](Pit& p, std::string_view name, std::uint32_t iface, std::uint64_t now_ms) {
            return std::string(to_string(p.on_interest(name, iface, at_ms(now_ms))));
          },
          py::arg("name"), py::arg("interface"), py::arg("now_ms") = 0)
      .def(
          "on_data",
          [](Pit& p, std::string_view name, std::uint64_t now_ms) { return data_result(p.on_data(name, at_ms(now_ms))); },
          py::arg("name"), py::arg("now_ms") = 0)
      .def(
          "lookup",
          [](const Pit& p, std::string_view name, std::uint64_t now_ms) {
            return p.lookup(name, at_ms(now_ms)).to_vector();
          },
          py::arg("name"), py::arg("now_ms") = 0)
      .def(
          "expire", [](Pit& p, std::uint64_t now_ms) { return p.expire(at_ms(now_ms)); }, py::arg("now_ms"))
      .def_property_readonly("memory_bits", &Pit::memory_bits)
      .def("__len__", &Pit::size);

  m.def(
      "make_pit",
      [](const std::string& kind, const PitSizing& sizing) { return make_pit(parse_pit_kind(kind), sizing); },
      py::arg("kind"), py::arg("sizing") = PitSizing{});
  m.def(
      "expected_memory_bits",
      [](const std::string& kind, const PitSizing& sizing) { return expected_memory_bits(parse_pit_kind(kind), sizing); },
      py::arg("kind"), py::arg("sizing") = PitSizing{});

  m.def("hash_counts", [] {
    const auto& h = hash_counters();
    return py::dict(py::arg("total") = h.total, py::arg("relocation") = h.relocation);
  });

  m.def(
      "memory_summary",
      [](const std::vector<double>& rates) {
        const MemorySummary s = memory_table(rates, MemoryModelParams{});
        py::list rows;
        for (const auto& r : s.rows) {
          rows.append(py::dict(py::arg("rate") = r.rate, py::arg("dicupit") = r.dicupit_bits,
                               py::arg("dipit") = r.dipit_bits, py::arg("chain") = r.chain_bits,
                               py::arg("ht32") = r.ht32_bits));
        }
        return py::dict(py::arg("rows") = rows, py::arg("vs_dipit") = s.mean_improvement_vs_dipit,
                        py::arg("vs_hash_tables") = s.mean_improvement_vs_hash_tables);
      },
      py::arg("rates") = default_rates());

  m.def(
      "gen_names", [](std::size_t count, double zipf_s, std::uint64_t seed) { return gen_names(count, zipf_s, seed).names; },
      py::arg("count"), py::arg("zipf_s") = 0.9, py::arg("seed") = 1);
  m.def(
      "gen_trace",
      [](std::size_t names, std::uint64_t interests, double dup_prob, std::uint32_t ports, std::uint64_t seed) {
        WorkloadSpec w;
        w.num_interests = interests;
        w.dup_prob = dup_prob;
        w.ports = ports;
        w.seed = seed;
        py::list out;
        for (const auto& e : gen_trace(gen_names(names, w.zipf_s, seed), w)) {
          const bool interest = e.kind == EventKind::Interest;
          out.append(py::make_tuple(e.time_us, interest ? "I" : "D", e.name,
                                    interest ? py::cast(e.interface) : py::none()));
        }
        return out;
      },
      py::arg("names"), py::arg("interests"), py::arg("dup_prob") = 0.0, py::arg("ports") = 8, py::arg("seed") = 1);

  m.def(
      "run_fixture",
      [](const std::string& kind) {
        SimConfig c;
        c.pit = parse_pit_kind(kind);
        const SimReport r = run_scenario(fanout_topology(), fanout_trace(), c);
        return py::dict(py::arg("delivered") = r.delivered, py::arg("aggregated") = r.aggregated,
                        py::arg("forwarded") = r.forwarded, py::arg("cs_hits") = r.cs_hits,
                        py::arg("misdelivered") = r.misdelivered);
      },
      py::arg("kind") = "dicupit");
}
