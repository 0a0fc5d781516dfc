import math

import pytest

import dicupit


def test_fingerprint_and_buckets_match_reference():
    cfg = dicupit.FilterConfig(num_buckets=1024, fingerprint_bits=6)
    assert dicupit.fingerprint_of("razi/ac/ir", cfg) == 2
    assert dicupit.candidate_buckets("razi/ac/ir", cfg) == (556, 839)


def test_alt_bucket_is_an_involution():
    cfg = dicupit.FilterConfig(num_buckets=256, fingerprint_bits=8)
    for i in range(0, 256, 17):
        for fp in (1, 7, 200):
            assert dicupit.alt_bucket(dicupit.alt_bucket(i, fp, cfg), fp, cfg) == i


def test_filter_roundtrip():
    f = dicupit.CuckooFilter(dicupit.FilterConfig(num_buckets=64, fingerprint_bits=12))
    names = [f"a/b/{i}" for i in range(100)]
    assert all(f.insert(n) for n in names)
    assert all(n in f for n in names)
    assert f.erase("a/b/3")
    assert len(f) == 99


def test_bad_config_raises():
    with pytest.raises(ValueError):
        dicupit.FilterConfig(num_buckets=1000)


def test_pit_aggregation_and_fanout():
    pit = dicupit.make_pit("dicupit")
    assert pit.on_interest("razi/ac/ir/x", 1, 0) == "ForwardToFib"
    assert pit.on_interest("razi/ac/ir/x", 2, 1) == "Aggregated"
    assert pit.lookup("razi/ac/ir/x", 2) == [1, 2]
    assert pit.on_data("razi/ac/ir/x", 5) == [1, 2]
    assert pit.on_data("razi/ac/ir/x", 6) is None


@pytest.mark.parametrize("kind", ["dicupit", "dipit", "chain", "ht32", "oracle"])
def test_fixture_counters(kind):
    assert dicupit.run_fixture(kind) == {
        "delivered": 3, "aggregated": 1, "forwarded": 1, "cs_hits": 1, "misdelivered": 0,
    }


def test_memory_bits_match_closed_form():
    s = dicupit.PitSizing()
    for kind in ("dicupit", "dipit", "chain", "ht32"):
        assert dicupit.make_pit(kind, s).memory_bits == dicupit.expected_memory_bits(kind, s)


def test_memory_summary_improvements():
    m = dicupit.memory_summary()
    assert len(m["rows"]) == 10
    assert abs(m["vs_dipit"] - 0.31) <= 0.08
    assert abs(m["vs_hash_tables"] - 0.68) <= 0.10


def test_two_hashes_per_packet():
    pit = dicupit.make_pit("dicupit")
    before = dicupit.hash_counts()
    pit.on_interest("n/1", 0)
    pit.on_data("n/1")
    after = dicupit.hash_counts()
    assert (after["total"] - after["relocation"]) - (before["total"] - before["relocation"]) == 4


def test_bloom_formula():
    assert math.isclose(dicupit.bloom_fpp(1000, 9586, 5), 0.011089432607540507, rel_tol=1e-12)


def test_trace_is_deterministic():
    a = dicupit.gen_trace(names=50, interests=40, dup_prob=0.3, seed=9)
    assert a == dicupit.gen_trace(names=50, interests=40, dup_prob=0.3, seed=9)
    assert [t for t, *_ in a] == sorted(t for t, *_ in a)
