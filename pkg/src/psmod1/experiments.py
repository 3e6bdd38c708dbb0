"""Desk-scale experiments: windowed excess sums, record minima, witness counts.

Fractional parts of alpha*p + beta are computed in 96-bit fixed point
from the target's high-precision value, so scan output is exact to one
float ulp, bit-stable across worker counts, and free of the drift a
float64 alpha*p would pick up by p ~ 1e7.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np

from ._parallel import chunk_bounds, ordered_map
from .diophantine import IrrationalTarget
from .fourier import WindowParams, window_F_grid
from .psset import GammaPair, PrimeRecord, intersection_primes, main_term, witness
from .realnum import DEFAULT_POLICY, PrecisionPolicy, power_floor_array
from .sieve import ArithmeticTables

FRAC_BITS = 96


def frac_alpha_p(
    values: np.ndarray, alpha: IrrationalTarget, beta: float, frac_bits: int = FRAC_BITS
) -> np.ndarray:
    """Fractional parts of alpha*v + beta over an integer array, via exact
    fixed-point arithmetic; the only rounding is the final cast to float."""
    A = alpha.fixed_point(frac_bits)
    bfrac = Fraction(float(beta))
    B = (bfrac.numerator << frac_bits) // bfrac.denominator
    modulus = 1 << frac_bits
    scale = 2.0 ** (-frac_bits)
    out = np.empty(len(values), dtype=np.float64)
    for i, v in enumerate(values):
        out[i] = ((A * int(v) + B) % modulus) * scale
    return out


def dist_alpha_p(
    values: np.ndarray, alpha: IrrationalTarget, beta: float, frac_bits: int = FRAC_BITS
) -> np.ndarray:
    f = frac_alpha_p(values, alpha, beta, frac_bits)
    return np.minimum(f, 1.0 - f)


@dataclass
class MinimaRecord:
    """A prime whose distance value beats every smaller admissible prime."""

    p: int
    value: float
    rank: int


@dataclass
class TheoremReport:
    """Counts of intersection primes whose distance beats p**(-theta+eps)."""

    theta: float
    epsilon: float
    limit: int
    witness_count: int
    total_intersection_primes: int
    sample_witnesses: List[PrimeRecord] = field(default_factory=list)

    def __post_init__(self):
        if not (0 <= self.witness_count <= self.total_intersection_primes):
            raise ValueError("witness count exceeds the intersection count")


@dataclass
class WindowExcessReport:
    """The windowed log-weighted excess over intersection primes and its
    four-part expansion through the telescoped floor identity."""

    total: float
    parts: Tuple[float, float, float, float]
    Delta: float
    T: int
    N: int
    alpha: float
    beta: float

    def __post_init__(self):
        part_sum = math.fsum(self.parts)
        scale = max(1.0, abs(self.total), sum(abs(p) for p in self.parts))
        if abs(self.total - part_sum) > 1e-8 * scale:
            raise ValueError(
                f"expansion identity broken: direct {self.total} vs parts {part_sum}"
            )

    @property
    def parts_total(self) -> float:
        return math.fsum(self.parts)


def _intersection_array(
    limit: int,
    pair: GammaPair,
    tables: ArithmeticTables,
    policy: PrecisionPolicy,
    threads: int,
) -> np.ndarray:
    return intersection_primes(1, limit, pair, tables, policy, threads)


def upsilon_eval(
    N: int,
    window: WindowParams,
    alpha: IrrationalTarget,
    beta: float,
    pair: GammaPair,
    tables: ArithmeticTables,
    policy: PrecisionPolicy = DEFAULT_POLICY,
    threads: int = 1,
) -> WindowExcessReport:
    """Windowed excess sum  sum_{p<=N, p in both sets} (F(alpha*p+beta) - 2*Delta) log p,
    computed directly and through its four-part telescoped expansion over all
    primes p <= N.  The two totals agree up to rounding because the bracketed
    product is exactly the joint membership indicator.
    """
    if N > tables.limit:
        raise ValueError(f"N={N} exceeds table limit {tables.limit}")

    def chunk_eval(bounds):
        lo, hi = bounds
        ps = tables.primes(lo, hi)
        if ps.size == 0:
            return (0.0,) * 5
        logp = np.log(ps.astype(np.float64))
        w = window_F_grid(frac_alpha_p(ps, alpha, beta), window.Delta) - 2.0 * window.Delta
        deltas, psidiffs, inds = [], [], []
        for gamma in (pair.gamma1, pair.gamma2):
            f0, fr0, x0 = power_floor_array(ps, gamma, policy)
            f1, fr1, x1 = power_floor_array(ps + 1, gamma, policy)
            c0 = f0 + (fr0 > 0.0)
            c1 = f1 + (fr1 > 0.0)
            deltas.append(x1 - x0)
            psidiffs.append((x0 - x1) + (c1 - c0))
            inds.append(c1 - c0)
        d1, d2 = deltas
        s1, s2 = psidiffs
        joint = (inds[0] == 1) & (inds[1] == 1)
        direct = math.fsum((w[joint] * logp[joint]).tolist())
        wl = w * logp
        u1 = math.fsum((d1 * d2 * wl).tolist())
        u2 = math.fsum((d1 * s2 * wl).tolist())
        u3 = math.fsum((d2 * s1 * wl).tolist())
        u4 = math.fsum((s1 * s2 * wl).tolist())
        return direct, u1, u2, u3, u4

    chunks = list(chunk_bounds(1, N))
    results = ordered_map(chunk_eval, chunks, threads)
    direct = math.fsum(r[0] for r in results)
    parts = tuple(math.fsum(r[i] for r in results) for i in (1, 2, 3, 4))
    return WindowExcessReport(
        total=direct,
        parts=parts,
        Delta=window.Delta,
        T=window.T,
        N=N,
        alpha=alpha.value(),
        beta=beta,
    )


def record_minima_scan(
    alpha: IrrationalTarget,
    beta: float,
    pair: GammaPair,
    limit: int,
    tables: ArithmeticTables,
    policy: PrecisionPolicy = DEFAULT_POLICY,
    threads: int = 1,
) -> List[MinimaRecord]:
    """Running minima of ||alpha*p + beta|| over intersection primes, ascending."""
    if limit > tables.limit:
        raise ValueError(f"limit={limit} exceeds table limit {tables.limit}")
    primes = _intersection_array(limit, pair, tables, policy, threads)
    if primes.size == 0:
        return []
    chunks = [primes[a:b] for a, b in chunk_bounds(0, primes.size)]
    dists = ordered_map(lambda ps: dist_alpha_p(ps, alpha, beta), chunks, threads)
    records: List[MinimaRecord] = []
    best = math.inf
    for ps, ds in zip(chunks, dists):
        if ds.size and ds.min() >= best:
            continue
        for p, d in zip(ps, ds):
            if d < best:
                best = float(d)
                records.append(MinimaRecord(p=int(p), value=best, rank=len(records) + 1))
    return records


def theorem_witness_count(
    alpha: IrrationalTarget,
    beta: float,
    pair: GammaPair,
    epsilon: float,
    limit: int,
    tables: ArithmeticTables,
    policy: PrecisionPolicy = DEFAULT_POLICY,
    threads: int = 1,
    sample_size: int = 5,
) -> TheoremReport:
    """Count intersection primes p <= limit with ||alpha*p+beta|| < p**(-theta+eps).

    epsilon = 0 is allowed (the count is well defined); the infinitude
    statement itself needs epsilon > 0.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    if limit > tables.limit:
        raise ValueError(f"limit={limit} exceeds table limit {tables.limit}")
    theta = pair.theta()
    if pair.mode == "theorem" and not (0.0 < theta < 1.0 / 38.0):
        raise ValueError(f"theorem-mode exponent saving {theta} outside (0, 1/38)")
    primes = _intersection_array(limit, pair, tables, policy, threads)
    if primes.size == 0:
        return TheoremReport(
            theta=theta,
            epsilon=epsilon,
            limit=limit,
            witness_count=0,
            total_intersection_primes=0,
        )
    dists = dist_alpha_p(primes, alpha, beta)
    thresholds = np.power(primes.astype(np.float64), -theta + epsilon)
    hits = dists < thresholds
    samples = []
    for idx in np.flatnonzero(hits)[:sample_size]:
        p = int(primes[idx])
        samples.append(
            PrimeRecord(
                p=p,
                n1=witness(p, pair.gamma1, policy),
                n2=witness(p, pair.gamma2, policy),
                frac_value=float(dists[idx]),
            )
        )
    return TheoremReport(
        theta=theta,
        epsilon=epsilon,
        limit=limit,
        witness_count=int(np.sum(hits)),
        total_intersection_primes=int(primes.size),
        sample_witnesses=samples,
    )


def counting_report(
    x_list: Sequence[float],
    pair: GammaPair,
    tables: ArithmeticTables,
    policy: PrecisionPolicy = DEFAULT_POLICY,
    threads: int = 1,
) -> List[Tuple[float, int, float, float]]:
    """Rows (x, joint count, main term, count/main) for each requested x."""
    xs = [float(x) for x in x_list]
    if not xs:
        return []
    max_x = max(xs)
    if max_x > tables.limit:
        raise ValueError(f"max x={max_x} exceeds table limit {tables.limit}")
    primes = _intersection_array(math.floor(max_x), pair, tables, policy, threads)
    rows = []
    for x in xs:
        count = int(np.searchsorted(primes, math.floor(x), side="right"))
        mt = main_term(x, pair)
        rows.append((x, count, mt, count / mt if mt else 0.0))
    return rows


def discrepancy_estimate(values: Sequence[float]) -> float:
    """Star-discrepancy upper estimate of a sample from [0, 1):
    max_i max(|i/n - v_(i)|, |v_(i) - (i-1)/n|) over the sorted sample."""
    vals = np.sort(np.asarray(values, dtype=np.float64))
    n = vals.size
    if n == 0:
        raise ValueError("discrepancy of an empty sample is undefined")
    if vals[0] < 0.0 or vals[-1] >= 1.0:
        raise ValueError("values must lie in [0, 1)")
    idx = np.arange(1, n + 1, dtype=np.float64)
    upper = np.abs(idx / n - vals)
    lower = np.abs(vals - (idx - 1.0) / n)
    return float(np.maximum(upper, lower).max())
