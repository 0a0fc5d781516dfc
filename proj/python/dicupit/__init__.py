from ._core import (
    CuckooFilter,
    FilterConfig,
    Pit,
    PitSizing,
    alt_bucket,
    bloom_fpp,
    candidate_buckets,
    cuckoo_fpr_bound,
    expected_memory_bits,
    fingerprint_of,
    gen_names,
    gen_trace,
    hash_counts,
    make_pit,
    memory_summary,
    run_fixture,
)

__all__ = [
    "CuckooFilter",
    "FilterConfig",
    "Pit",
    "PitSizing",
    "alt_bucket",
    "bloom_fpp",
    "candidate_buckets",
    "cuckoo_fpr_bound",
    "expected_memory_bits",
    "fingerprint_of",
    "gen_names",
    "gen_trace",
    "hash_counts",
    "make_pit",
    "memory_summary",
    "run_fixture",
]
