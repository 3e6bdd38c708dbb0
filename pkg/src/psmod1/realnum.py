"""Dependable real arithmetic for floor-sensitive number theory.

Everything downstream (set membership, sawtooth sums, exponential phases)
rests on computing ``floor(n**gamma)`` correctly and on reducing large
phases modulo one before any trigonometry.  Plain float64 gives about
1e-9 absolute accuracy on ``n**gamma`` for n up to 1e8, so a guard band
around integer crossings triggers a recomputation in extended precision
(mpmath), and exponents supplied as exact rationals get an exact integer
fast path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath
import numpy as np

GammaLike = Union[float, Fraction]


class UnresolvableBoundaryError(ArithmeticError):
    """n**gamma sits too close to an integer to classify at the configured precision."""


@dataclass(frozen=True)
class PrecisionPolicy:
    """Two-tier precision ladder for power evaluations.

    guard_band: fractional parts within this distance of 0 or 1 are
        recomputed in extended precision.  Double precision leaves
        ~1e-9 relative noise on n**gamma for n <= 1e8; the default band
        is a thousand times that floor.
    high_precision_bits: mantissa bits for the escalated computation.
    """

    guard_band: float = 1e-6
    high_precision_bits: int = 192

    def __post_init__(self):
        if not (0.0 < self.guard_band < 0.25):
            raise ValueError(f"guard_band must lie in (0, 1/4), got {self.guard_band}")
        if self.high_precision_bits < 96:
            raise ValueError(
                f"high_precision_bits must be at least 96, got {self.high_precision_bits}"
            )


DEFAULT_POLICY = PrecisionPolicy()


@dataclass(frozen=True)
class UnitComplex:
    """A point on the unit circle, produced by :func:`e_phase`."""

    re: float
    im: float

    def as_complex(self) -> complex:
        return complex(self.re, self.im)

    def norm_defect(self) -> float:
        return abs(self.re * self.re + self.im * self.im - 1.0)


def _require_finite(x: float, name: str = "x") -> float:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"{name} must be finite, got {x!r}")
    return x


def frac(x: float) -> float:
    """Fractional part x - floor(x), in [0, 1)."""
    x = _require_finite(x)
    return x - math.floor(x)


def dist_nearest(x: float) -> float:
    """Distance from x to the nearest integer, in [0, 1/2]."""
    f = frac(x)
    return min(f, 1.0 - f)


def sawtooth(x: float) -> float:
    """The centered sawtooth frac(x) - 1/2, with values in [-1/2, 1/2)."""
    return frac(x) - 0.5


def e_phase(x: float) -> UnitComplex:
    """exp(2*pi*i*x) as a UnitComplex.

    The argument is reduced modulo one before the trig calls; without the
    reduction, phases of size ~1e10 would lose all angular accuracy.
    """
    r = frac(x)
    return UnitComplex(math.cos(2.0 * math.pi * r), math.sin(2.0 * math.pi * r))


def _integer_nth_root(n: int, k: int) -> int:
    """Largest r with r**k <= n, for n >= 1, k >= 1."""
    if k == 1:
        return n
    if n < (1 << k):
        return 1
    r = int(round(n ** (1.0 / k)))
    r = max(r, 1)
    while r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def _exact_rational_power(n: int, gamma: GammaLike):
    """Return n**gamma as an exact int when gamma's rational form makes it one.

    Both Fraction and float exponents are treated as the exact rationals
    they denote (a float is a dyadic rational, so identity and dyadic
    exponents like 1.0, 0.5, 0.75 resolve exactly; a decimal like 0.6
    has an astronomical denominator and never fires).
    """
    g = gamma if isinstance(gamma, Fraction) else Fraction(float(gamma))
    u, v = g.numerator, g.denominator
    if n == 1:
        return 1
    if v > n.bit_length():
        return None
    root = _integer_nth_root(n, v)
    if root**v == n:
        return root**u
    return None


def _gamma_to_mpf(gamma: GammaLike) -> mpmath.mpf:
    if isinstance(gamma, Fraction):
        return mpmath.mpf(gamma.numerator) / mpmath.mpf(gamma.denominator)
    return mpmath.mpf(float(gamma))


def pow_floor_frac(n: int, gamma: GammaLike, policy: PrecisionPolicy = DEFAULT_POLICY):
    """(floor(n**gamma), frac(n**gamma)) with the floor guaranteed exact.

    Fast path is float64.  If the fractional part lands inside the guard
    band, an exact rational test runs first, then an mpmath recomputation
    at policy.high_precision_bits.  If even that cannot separate n**gamma
    from an integer by 2**(-bits/2), the boundary is declared
    unresolvable and the caller decides policy.
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    g = float(gamma)
    if not (0.0 < g <= 1.0):
        raise ValueError(f"gamma must lie in (0, 1], got {g}")

    x = n**g
    fl = math.floor(x)
    fr = x - fl
    if policy.guard_band <= fr <= 1.0 - policy.guard_band:
        return fl, fr

    exact = _exact_rational_power(n, gamma)
    if exact is not None:
        return exact, 0.0

    with mpmath.workprec(policy.high_precision_bits):
        xp = mpmath.power(mpmath.mpf(n), _gamma_to_mpf(gamma))
        flp = mpmath.floor(xp)
        frp = xp - flp
        sep = min(frp, 1 - frp)
        if 0 < sep < mpmath.mpf(2) ** (-(policy.high_precision_bits // 2)):
            raise UnresolvableBoundaryError(
                f"{n}**{gamma} is within 2^-{policy.high_precision_bits // 2} "
                "of an integer; raise high_precision_bits or supply gamma as a rational"
            )
        return int(flp), float(frp)


def power_floor_array(n: np.ndarray, gamma: GammaLike, policy: PrecisionPolicy = DEFAULT_POLICY):
    """Vectorized n**gamma with guarded floors.

    Returns (floors, fracs, raw) where floors are exact (escalated
    entries fixed up scalar-wise), fracs are the guarded fractional
    parts in [0, 1), and raw is the float64 power array.  raw - floors
    may stray outside [0, 1) by ~1e-9 on escalated entries; callers that
    need exact telescoping against raw should subtract floors from raw
    themselves.
    """
    n = np.asarray(n, dtype=np.int64)
    raw = np.power(n.astype(np.float64), float(gamma))
    floors = np.floor(raw)
    fracs = raw - floors
    suspect = (fracs < policy.guard_band) | (fracs > 1.0 - policy.guard_band)
    for i in np.flatnonzero(suspect):
        fl, fr = pow_floor_frac(int(n[i]), gamma, policy)
        floors[i] = fl
        fracs[i] = fr
    return floors.astype(np.int64), fracs, raw


def phase_mod1(x: np.ndarray) -> np.ndarray:
    """Reduce an array of phases modulo one (vector counterpart of frac)."""
    x = np.asarray(x, dtype=np.float64)
    return x - np.floor(x)


def dist_nearest_array(x: np.ndarray) -> np.ndarray:
    f = phase_mod1(x)
    return np.minimum(f, 1.0 - f)
