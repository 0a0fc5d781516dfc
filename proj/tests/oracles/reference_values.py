"""Independent reference values for the C++ test suites.

Uses the `mmh3` package (MurmurHash3 reference bindings) and `mpmath`, so
none of the numbers below go through the C++ hashing or formula code.
Run: python3 tests/oracles/reference_values.py
"""
import struct

import mmh3
import mpmath

FP_SEED_XOR = 0x9747B28C


def hash64(data: bytes, seed: int) -> int:
    return mmh3.hash64(data, seed, signed=False)[0]


def fingerprint_of(name: str, fp_bits: int, seed: int = 0) -> int:
    h = hash64(name.encode(), seed)
    fp = h >> (64 - fp_bits)
    return fp if fp != 0 else 1


def candidate_buckets(name: str, fp_bits: int, num_buckets: int, seed: int = 0):
    h = hash64(name.encode(), seed)
    fp = fingerprint_of(name, fp_bits, seed)
    i1 = h & (num_buckets - 1)
    t = hash64(struct.pack("<H", fp), seed ^ FP_SEED_XOR) & (num_buckets - 1)
    return i1, i1 ^ t


if __name__ == "__main__":
    for name in ["razi/ac/ir", "razi/ac/ir/eng/computer-engineering.html"]:
        print(name, "fp6", fingerprint_of(name, 6), "fp12", fingerprint_of(name, 12),
              "buckets(e=1024,f=6)", candidate_buckets(name, 6, 1024))
    print("hash64('razi/ac/ir', 0) =", hex(hash64(b"razi/ac/ir", 0)))
    print("hash64('', 0) =", hex(hash64(b"", 0)))
    print("hash64('hello', 42) =", hex(hash64(b"hello", 42)))
    print("murmur32('razi/ac/ir', 0) =", hex(mmh3.hash(b"razi/ac/ir", 0, signed=False)))
    print("murmur32('hello', 42) =", hex(mmh3.hash(b"hello", 42, signed=False)))
    print("murmur32('', 0) =", hex(mmh3.hash(b"", 0, signed=False)))
    mpmath.mp.dps = 40
    print("bloom_fpp(n/m=0.1,k=5) =", mpmath.nstr((1 - mpmath.e ** (-0.5)) ** 5, 20))
    print("bloom_fpp(n=1000,m=9586,k=5) =", mpmath.nstr((1 - mpmath.e ** (-5 * mpmath.mpf(1000) / 9586)) ** 5, 20))
