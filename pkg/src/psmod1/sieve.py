"""Segmented sieve producing primes, von Mangoldt witnesses, and Mobius values.

The tables are the substrate for every sum over primes in the package.
Lambda is not tabulated as floats: prime powers carry a (p, k) witness
and log p is taken in double precision on demand, so no rounding policy
is baked into storage.  A completed table is immutable and safe to share
between threads.

Cache file layout (bit-exact, little-endian):

    magic    4 bytes  b"PSPC"
    version  u16
    limit    u64
    payload  64-bit words of the odd-number bitset; bit i of the stream
             is 1 iff 2*i + 1 is prime (2 is implied by limit >= 2)
    checksum u64 FNV-1a over the payload bytes

Only the bitset is persisted; Mobius values and prime-power witnesses
are rebuilt deterministically on load, so a round trip compares equal.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

MAX_LIMIT = 1 << 38  # documented memory ceiling
SEGMENT_ODDS = 1 << 20  # odd numbers per sieving segment

CACHE_MAGIC = b"PSPC"
CACHE_VERSION = 1

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_M64 = (1 << 64) - 1


class CacheFormatError(ValueError):
    """Raised when a prime cache file fails structural validation."""


def fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for b in data:
        h = ((h ^ b) * _FNV_PRIME) & _M64
    return h


@dataclass
class ArithmeticTables:
    """Primality bits, Mobius values, and prime-power witnesses on [2, limit]."""

    limit: int
    is_prime: np.ndarray  # bool, indexed 0..limit
    mu: np.ndarray  # int8, indexed 0..limit
    prime_powers: Dict[int, Tuple[int, int]] = field(default_factory=dict)  # n -> (p, k), k >= 2

    def __eq__(self, other) -> bool:
        if not isinstance(other, ArithmeticTables):
            return NotImplemented
        return (
            self.limit == other.limit
            and np.array_equal(self.is_prime, other.is_prime)
            and np.array_equal(self.mu, other.mu)
            and self.prime_powers == other.prime_powers
        )

    def primes(self, lo: int = 1, hi: Optional[int] = None) -> np.ndarray:
        """Primes p with lo < p <= hi, ascending."""
        hi = self.limit if hi is None else min(hi, self.limit)
        if hi <= lo:
            return np.empty(0, dtype=np.int64)
        return np.flatnonzero(self.is_prime[lo + 1 : hi + 1]).astype(np.int64) + lo + 1

    def lambda_witness(self, n: int) -> Optional[Tuple[int, int]]:
        """(p, k) with n = p**k when n is a prime power, else None."""
        if n <= 1 or n > self.limit:
            return None
        if self.is_prime[n]:
            return (n, 1)
        return self.prime_powers.get(n)

    def lambda_value(self, n: int) -> float:
        w = self.lambda_witness(n)
        return math.log(w[0]) if w else 0.0

    def lambda_support(self, lo: int, hi: int) -> Tuple[np.ndarray, np.ndarray]:
        """All n in (lo, hi] with Lambda(n) != 0, with their log p weights."""
        hi = min(hi, self.limit)
        ps = self.primes(lo, hi)
        pps = sorted(n for n in self.prime_powers if lo < n <= hi)
        if not pps:
            return ps, np.log(ps.astype(np.float64)) if ps.size else np.empty(0)
        ns = np.concatenate([ps, np.array(pps, dtype=np.int64)])
        order = np.argsort(ns, kind="stable")
        ns = ns[order]
        weights = np.empty(ns.size, dtype=np.float64)
        for i, n in enumerate(ns):
            w = self.lambda_witness(int(n))
            weights[i] = math.log(w[0])
        return ns, weights

    def mobius(self, n: int) -> int:
        if n < 1 or n > self.limit:
            raise ValueError(f"n={n} outside table range [1, {self.limit}]")
        return int(self.mu[n])

    def factorize(self, n: int) -> list:
        """Prime factorization [(p, e), ...] for 1 <= n <= limit."""
        if n < 1 or n > self.limit:
            raise ValueError(f"n={n} outside table range [1, {self.limit}]")
        out = []
        m = n
        for p in self.primes(1, int(math.isqrt(n))):
            p = int(p)
            if p * p > m:
                break
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                out.append((p, e))
        if m > 1:
            out.append((m, 1))
        return out


def _odd_composite_mask(limit: int, segment_odds: int) -> np.ndarray:
    """Bool mask over odd numbers 1,3,5,... <= limit; True means prime.

    Sieved segment by segment; the merge is a plain ordered write, so the
    result is identical for any segment size.
    """
    n_odds = (limit + 1) // 2  # odds 1, 3, ..., covering <= limit
    odd_prime = np.ones(n_odds, dtype=bool)
    odd_prime[0] = False  # 1 is not prime
    root = math.isqrt(limit)
    # base primes up to sqrt(limit) by a tiny dense sieve
    base = np.ones(root + 1, dtype=bool)
    base[:2] = False
    for p in range(2, math.isqrt(root) + 1):
        if base[p]:
            base[p * p :: p] = False
    base_odd_primes = np.flatnonzero(base)[1:]  # drop 2; odd base primes

    for seg_lo in range(0, n_odds, segment_odds):
        seg_hi = min(seg_lo + segment_odds, n_odds)
        # segment covers odd values 2*seg_lo+1 .. 2*seg_hi-1
        val_lo = 2 * seg_lo + 1
        seg = odd_prime[seg_lo:seg_hi]
        for p in base_odd_primes:
            p = int(p)
            start_val = max(p * p, ((val_lo + p - 1) // p) * p)
            if start_val % 2 == 0:
                start_val += p
            if start_val > 2 * seg_hi - 1:
                continue
            start_idx = (start_val - 1) // 2 - seg_lo
            seg[start_idx::p] = False
    return odd_prime


def _mobius_table(limit: int, primes: np.ndarray) -> np.ndarray:
    mu = np.ones(limit + 1, dtype=np.int8)
    mu[0] = 0
    for p in primes:
        p = int(p)
        mu[p::p] *= -1
        if p * p <= limit:
            mu[p * p :: p * p] = 0
    return mu


def sieve_range(limit: int, segment_odds: int = SEGMENT_ODDS) -> ArithmeticTables:
    """Build complete arithmetic tables on [2, limit]. Deterministic."""
    limit = int(limit)
    if limit < 2 or limit > MAX_LIMIT:
        raise ValueError(f"limit must lie in [2, {MAX_LIMIT}], got {limit}")
    odd_prime = _odd_composite_mask(limit, segment_odds)
    is_prime = np.zeros(limit + 1, dtype=bool)
    is_prime[2] = True
    odd_idx = np.flatnonzero(odd_prime)
    is_prime[2 * odd_idx + 1] = True

    primes = np.flatnonzero(is_prime).astype(np.int64)
    mu = _mobius_table(limit, primes)

    prime_powers: Dict[int, Tuple[int, int]] = {}
    for p in primes:
        p = int(p)
        if p * p > limit:
            break
        q = p * p
        k = 2
        while q <= limit:
            prime_powers[q] = (p, k)
            q *= p
            k += 1
    return ArithmeticTables(limit=limit, is_prime=is_prime, mu=mu, prime_powers=prime_powers)


def _pack_odd_bits(is_prime: np.ndarray) -> bytes:
    """Little-endian 64-bit words over the odd-number bitset (bit i <-> 2i+1)."""
    limit = is_prime.size - 1
    n_odds = (limit + 1) // 2
    odd_bits = is_prime[1::2][:n_odds]
    packed = np.packbits(odd_bits, bitorder="little").tobytes()
    pad = (-len(packed)) % 8
    return packed + b"\x00" * pad


def _unpack_odd_bits(payload: bytes, limit: int) -> np.ndarray:
    n_odds = (limit + 1) // 2
    bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8), bitorder="little")
    if bits.size < n_odds:
        raise CacheFormatError("payload too short for declared limit")
    is_prime = np.zeros(limit + 1, dtype=bool)
    odd_idx = np.flatnonzero(bits[:n_odds].astype(bool))
    is_prime[2 * odd_idx + 1] = True
    if limit >= 2:
        is_prime[2] = True
    is_prime[1] = False
    return is_prime


def save_cache(tables: ArithmeticTables, path) -> None:
    """Persist the primality bitset. Mobius and witnesses are derived on load."""
    payload = _pack_odd_bits(tables.is_prime)
    with open(path, "wb") as fh:
        fh.write(struct.pack("<4sHQ", CACHE_MAGIC, CACHE_VERSION, tables.limit))
        fh.write(payload)
        fh.write(struct.pack("<Q", fnv1a64(payload)))


def load_cache(path) -> ArithmeticTables:
    with open(path, "rb") as fh:
        header = fh.read(struct.calcsize("<4sHQ"))
        if len(header) != struct.calcsize("<4sHQ"):
            raise CacheFormatError("truncated header")
        magic, version, limit = struct.unpack("<4sHQ", header)
        if magic != CACHE_MAGIC:
            raise CacheFormatError(f"bad magic {magic!r}")
        if version != CACHE_VERSION:
            raise CacheFormatError(f"unsupported cache version {version}")
        body = fh.read()
    if len(body) < 8:
        raise CacheFormatError("truncated payload")
    payload, (checksum,) = body[:-8], struct.unpack("<Q", body[-8:])
    if fnv1a64(payload) != checksum:
        raise CacheFormatError("checksum mismatch: cache file is corrupted")
    is_prime = _unpack_odd_bits(payload, int(limit))

    primes = np.flatnonzero(is_prime).astype(np.int64)
    mu = _mobius_table(int(limit), primes)
    prime_powers: Dict[int, Tuple[int, int]] = {}
    for p in primes:
        p = int(p)
        if p * p > limit:
            break
        q = p * p
        k = 2
        while q <= limit:
            prime_powers[q] = (p, k)
            q *= p
            k += 1
    return ArithmeticTables(limit=int(limit), is_prime=is_prime, mu=mu, prime_powers=prime_powers)


def tau_k(n: int, k: int, tables: Optional[ArithmeticTables] = None) -> int:
    """Number of ordered k-tuples (d1, ..., dk) with d1*...*dk = n."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be >= 1")
    if k < 2:
        raise ValueError("k must be >= 2")
    if n == 1:
        return 1
    if tables is not None and n <= tables.limit:
        factors = tables.factorize(n)
    else:
        factors = []
        m = n
        d = 2
        while d * d <= m:
            if m % d == 0:
                e = 0
                while m % d == 0:
                    m //= d
                    e += 1
                factors.append((d, e))
            d += 1
        if m > 1:
            factors.append((m, 1))
    out = 1
    for _, e in factors:
        out *= math.comb(e + k - 1, k - 1)
    return out
