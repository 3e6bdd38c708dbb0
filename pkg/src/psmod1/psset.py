"""Piatetski-Shapiro set membership and joint prime counting.

A positive integer m belongs to the floor-power set of exponent gamma in
(0, 1] when m = floor(n**(1/gamma)) for some positive integer n.  The
working test is the floor-difference indicator

    ceil((p+1)**gamma) - ceil(p**gamma)  in {0, 1},

equal to 1 exactly on members; all floors run through the guarded power
evaluation so indicator flips at integer crossings are trustworthy.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

import mpmath
import numpy as np

from ._parallel import chunk_bounds, ordered_map
from .realnum import (
    DEFAULT_POLICY,
    GammaLike,
    PrecisionPolicy,
    pow_floor_frac,
    power_floor_array,
)
from .sieve import ArithmeticTables

THEOREM_SUM_LOW = Fraction(23, 12)


class GammaRangeWarning(UserWarning):
    """Exploratory-mode exponents outside the admissible theorem range."""


@dataclass(frozen=True)
class GammaPair:
    """The two exponents with their admissibility mode.

    theorem mode enforces 1/2 < gamma2 < gamma1 < 1 and
    23/12 < gamma1 + gamma2 < 2; exploratory mode only warns, keeping the
    counting machinery usable outside the proven range (including the
    degenerate gamma1 = 1 preset, where the first set is all integers).
    """

    gamma1: GammaLike
    gamma2: GammaLike
    mode: str = "theorem"

    def __post_init__(self):
        if self.mode not in ("theorem", "exploratory"):
            raise ValueError(f"mode must be 'theorem' or 'exploratory', got {self.mode!r}")
        g1, g2 = float(self.gamma1), float(self.gamma2)
        if not (0.0 < g2 <= 1.0 and 0.0 < g1 <= 1.0):
            raise ValueError(f"exponents must lie in (0, 1], got ({g1}, {g2})")
        ordered = 0.5 < g2 < g1 < 1.0
        in_window = THEOREM_SUM_LOW < Fraction(g1) + Fraction(g2) < 2
        if self.mode == "theorem":
            if not ordered:
                raise ValueError(f"theorem mode needs 1/2 < gamma2 < gamma1 < 1, got ({g1}, {g2})")
            if not in_window:
                raise ValueError(
                    f"theorem mode needs 23/12 < gamma1+gamma2 < 2, got sum {g1 + g2}"
                )
        elif not (ordered and in_window):
            warnings.warn(
                f"exponents ({g1}, {g2}) leave the admissible theorem range",
                GammaRangeWarning,
                stacklevel=2,
            )

    @property
    def gamma_sum(self) -> float:
        return float(self.gamma1) + float(self.gamma2)

    def theta(self) -> float:
        """Exponent-saving rate (12*(gamma1+gamma2) - 23) / 38."""
        return (12.0 * self.gamma_sum - 23.0) / 38.0

    @classmethod
    def degenerate_single(cls, gamma2: GammaLike) -> "GammaPair":
        """Exploratory preset with gamma1 = 1: the first set is all integers,
        so scans reduce to a single Piatetski-Shapiro set and theta() becomes
        (12*gamma2 - 11)/38.  Only meaningful for 11/12 < gamma2 < 1."""
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", GammaRangeWarning)
            return cls(1.0, gamma2, mode="exploratory")


@dataclass
class PrimeRecord:
    """A prime with optional set witnesses and an optional scan value."""

    p: int
    n1: Optional[int] = None
    n2: Optional[int] = None
    frac_value: Optional[float] = None


def membership_indicator(p: int, gamma: GammaLike, policy: PrecisionPolicy = DEFAULT_POLICY) -> int:
    """floor(-p**gamma) - floor(-(p+1)**gamma), which is 1 on members, else 0."""
    fl0, fr0 = pow_floor_frac(p, gamma, policy)
    fl1, fr1 = pow_floor_frac(p + 1, gamma, policy)
    ceil0 = fl0 + (1 if fr0 > 0.0 else 0)
    ceil1 = fl1 + (1 if fr1 > 0.0 else 0)
    return ceil1 - ceil0


def is_member(p: int, gamma: GammaLike, policy: PrecisionPolicy = DEFAULT_POLICY) -> bool:
    """Whether p = floor(n**(1/gamma)) for some positive integer n."""
    return membership_indicator(p, gamma, policy) == 1


def witness(p: int, gamma: GammaLike, policy: PrecisionPolicy = DEFAULT_POLICY) -> Optional[int]:
    """The unique n = ceil(p**gamma) with floor(n**(1/gamma)) = p, if membership holds."""
    fl0, fr0 = pow_floor_frac(p, gamma, policy)
    fl1, fr1 = pow_floor_frac(p + 1, gamma, policy)
    ceil0 = fl0 + (1 if fr0 > 0.0 else 0)
    ceil1 = fl1 + (1 if fr1 > 0.0 else 0)
    if ceil1 - ceil0 != 1:
        return None
    return ceil0


def member_mask(values: np.ndarray, gamma: GammaLike, policy: PrecisionPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Vectorized membership indicator over an integer array."""
    values = np.asarray(values, dtype=np.int64)
    fl0, fr0, _ = power_floor_array(values, gamma, policy)
    fl1, fr1, _ = power_floor_array(values + 1, gamma, policy)
    ceil0 = fl0 + (fr0 > 0.0)
    ceil1 = fl1 + (fr1 > 0.0)
    return (ceil1 - ceil0) == 1


def verify_witness(n: int, gamma: GammaLike, p: int, bits: int = 192) -> bool:
    """Extended-precision check that floor(n**(1/gamma)) == p."""
    with mpmath.workprec(bits):
        if isinstance(gamma, Fraction):
            inv = mpmath.mpf(gamma.denominator) / mpmath.mpf(gamma.numerator)
        else:
            inv = 1 / mpmath.mpf(float(gamma))
        return int(mpmath.floor(mpmath.power(mpmath.mpf(int(n)), inv))) == int(p)


def _intersection_chunk(args):
    lo, hi, pair, tables, policy = args
    ps = tables.primes(lo, hi)
    if ps.size == 0:
        return ps, ps, ps
    m1 = member_mask(ps, pair.gamma1, policy)
    m2 = member_mask(ps, pair.gamma2, policy)
    keep = m1 & m2
    ps = ps[keep]
    fl1, fr1, _ = power_floor_array(ps, pair.gamma1, policy)
    fl2, fr2, _ = power_floor_array(ps, pair.gamma2, policy)
    n1 = fl1 + (fr1 > 0.0)
    n2 = fl2 + (fr2 > 0.0)
    return ps, n1, n2


def intersection_primes(
    lo: int,
    hi: int,
    pair: GammaPair,
    tables: ArithmeticTables,
    policy: PrecisionPolicy = DEFAULT_POLICY,
    threads: int = 1,
) -> np.ndarray:
    """Primes in (lo, hi] belonging to both sets, ascending. Array form."""
    if hi > tables.limit:
        raise ValueError(f"range end {hi} exceeds table limit {tables.limit}")
    chunks = [(a, b, pair, tables, policy) for a, b in chunk_bounds(lo, hi)]
    parts = ordered_map(_intersection_chunk, chunks, threads)
    ps = [part[0] for part in parts]
    return np.concatenate(ps) if ps else np.empty(0, dtype=np.int64)


def enumerate_intersection(
    lo: int,
    hi: int,
    pair: GammaPair,
    tables: ArithmeticTables,
    policy: PrecisionPolicy = DEFAULT_POLICY,
    threads: int = 1,
) -> Iterator[PrimeRecord]:
    """Stream PrimeRecords for primes in (lo, hi] lying in both sets.

    Single-threaded iteration is lazy chunk by chunk; with workers the
    chunks are precomputed but still yielded in ascending order.
    """
    if hi > tables.limit:
        raise ValueError(f"range end {hi} exceeds table limit {tables.limit}")
    chunks = [(a, b, pair, tables, policy) for a, b in chunk_bounds(lo, hi)]
    if threads <= 1:
        results = map(_intersection_chunk, chunks)
    else:
        results = ordered_map(_intersection_chunk, chunks, threads)
    for ps, n1, n2 in results:
        for i in range(ps.size):
            yield PrimeRecord(p=int(ps[i]), n1=int(n1[i]), n2=int(n2[i]))


def count_joint(
    x: float,
    pair: GammaPair,
    tables: ArithmeticTables,
    policy: PrecisionPolicy = DEFAULT_POLICY,
    threads: int = 1,
) -> int:
    """Number of primes p <= x in both sets."""
    hi = math.floor(x)
    if hi < 2:
        return 0
    return int(intersection_primes(1, hi, pair, tables, policy, threads).size)


def main_term(x: float, pair: GammaPair) -> float:
    """Leading-order prediction for the joint count:
    gamma1*gamma2/(gamma1+gamma2-1) * x**(gamma1+gamma2-1) / log x.
    """
    if x <= 1.0:
        raise ValueError(f"x must exceed 1, got {x}")
    g1, g2 = float(pair.gamma1), float(pair.gamma2)
    s = g1 + g2
    return (g1 * g2 / (s - 1.0)) * x ** (s - 1.0) / math.log(x)


def single_main_term(x: float, gamma: GammaLike) -> float:
    """Leading-order prediction x**gamma / log x for a single set."""
    if x <= 1.0:
        raise ValueError(f"x must exceed 1, got {x}")
    return x ** float(gamma) / math.log(x)
