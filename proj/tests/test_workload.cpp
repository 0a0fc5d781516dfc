#include <map>
#include <set>
#include <sstream>

#include "doctest.h"
#include "dicupit/workload.hpp"

using namespace dicupit;

TEST_CASE("name parsing") {
  CHECK(Name::parse("/razi/ac/ir").rendered() == "razi/ac/ir");
  CHECK(Name::parse("razi/ac/ir").components.size() == 3);
  CHECK_THROWS_AS(Name::parse("a//b"), ParseError);
  CHECK_THROWS_AS(Name::parse(""), ParseError);
  CHECK_THROWS_AS(Name::parse("a/\xff"), ParseError);
  CHECK_THROWS_AS(Name::parse(std::string(9000, 'x')), ParseError);
}

TEST_CASE("load_names skips blanks and drops duplicates") {
  std::istringstream in("a/b\n\n/c\na/b\nd\n");
  CHECK(load_names(in) == std::vector<std::string>{"a/b", "c", "d"});
  std::istringstream empty("");
  CHECK(load_names(empty).empty());
}

TEST_CASE("load_names reports the failing line") {
  std::istringstream in("a/b\nc//d\n");
  try {
    load_names(in);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("gen_names is deterministic and distinct") {
  const NameCorpus a = gen_names(5000, 0.9, 3);
  const NameCorpus b = gen_names(5000, 0.9, 3);
  CHECK(a.names == b.names);
  CHECK(std::set<std::string>(a.names.begin(), a.names.end()).size() == 5000);
  double sum = 0;
  for (double w : a.weights) sum += w;
  CHECK(sum == doctest::Approx(1.0));
  CHECK(a.weights.front() > a.weights.back());
  for (const auto& n : a.names) {
    const auto c = Name::parse(n).components.size();
    CHECK(c >= 2);
    CHECK(c <= 8);
  }
  CHECK(gen_names(100, 0.9, 4).names != gen_names(100, 0.9, 3).names);
}

TEST_CASE("zipf weights") {
  const auto u = zipf_weights(4, 0);
  for (double w : u) CHECK(w == doctest::Approx(0.25));
  const auto z = zipf_weights(3, 1);
  CHECK(z[0] / z[1] == doctest::Approx(2.0));
}

TEST_CASE("trace properties") {
  const NameCorpus corpus = gen_names(20000, 0.9, 1);
  WorkloadSpec spec;
  spec.num_interests = 3000;
  spec.dup_prob = 0.3;
  spec.rate_per_port = 1e4;
  const auto trace = gen_trace(corpus, spec);
  CHECK(trace == gen_trace(corpus, spec));

  std::uint64_t interests = 0, data = 0;
  std::map<std::string, int> pending;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& e = trace[i];
    CHECK(e.seq == i);
    if (i > 0) CHECK(e.time_us >= trace[i - 1].time_us);
    if (e.kind == EventKind::Interest) {
      ++interests;
      CHECK(e.interface < spec.ports);
      ++pending[e.name];
    } else {
      ++data;
      CHECK(pending[e.name] > 0);
      pending[e.name] = 0;
    }
  }
  CHECK(data == spec.num_interests);
  CHECK(interests > spec.num_interests);
  CHECK(interests < spec.num_interests * 1.5);
}

TEST_CASE("trace CSV round trip and errors") {
  std::vector<TraceEvent> ev{{0, 0, EventKind::Interest, "a,b/\"c\"", 3}, {1, 10, EventKind::Data, "a,b/\"c\"", 0}};
  std::ostringstream out;
  write_trace_csv(out, ev);
  std::istringstream in(out.str());
  CHECK(read_trace_csv(in) == ev);

  std::istringstream bad("seq,time_us,kind,name,interface\n0,0,I,a,1\n1,5,X,a,\n");
  try {
    read_trace_csv(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  std::istringstream header("nope\n");
  CHECK_THROWS_AS(read_trace_csv(header), ParseError);
}

TEST_CASE("workload spec validation") {
  WorkloadSpec s;
  s.dup_prob = 1.5;
  CHECK_THROWS(s.validate());
  s = WorkloadSpec{};
  s.ports = 0;
  CHECK_THROWS(s.validate());
}
