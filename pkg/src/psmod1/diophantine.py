"""Rational approximation machinery: convergents, Dirichlet pairs, capped sums.

Continued-fraction extraction is precision-fragile, so targets are
evaluated in mpmath at a configurable bit count and convergent
generation stops before denominators outrun the precision horizon
(q**2 < 2**(bits-16)); beyond that point the partial quotients would be
garbage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple, Union

import mpmath
import numpy as np

from ._parallel import chunk_bounds
from .realnum import dist_nearest_array

NAMED_TARGETS = ("sqrt2", "golden", "pi", "e")


@dataclass(frozen=True)
class IrrationalTarget:
    """A reproducible real target: named constant, decimal string, or rational.

    Rational targets exist for testing; they terminate continued
    fractions early and make scan minima stall, which is the documented
    reason the headline scans demand an irrational.
    """

    spec: Union[str, Fraction]
    precision_bits: int = 256

    def __post_init__(self):
        if self.precision_bits < 64:
            raise ValueError("precision_bits must be at least 64")
        if isinstance(self.spec, str) and self.spec not in NAMED_TARGETS:
            # must parse as a decimal literal
            try:
                float(self.spec)
            except ValueError:
                raise ValueError(
                    f"target spec {self.spec!r} is neither a named constant "
                    f"{NAMED_TARGETS} nor a decimal string"
                ) from None

    @property
    def is_rational(self) -> bool:
        return isinstance(self.spec, Fraction)

    def mpf(self) -> mpmath.mpf:
        """Value at precision_bits (caller should hold mpmath.workprec)."""
        if isinstance(self.spec, Fraction):
            return mpmath.mpf(self.spec.numerator) / mpmath.mpf(self.spec.denominator)
        if self.spec == "sqrt2":
            return mpmath.sqrt(2)
        if self.spec == "golden":
            return (1 + mpmath.sqrt(5)) / 2
        if self.spec == "pi":
            return +mpmath.pi
        if self.spec == "e":
            return +mpmath.e
        return mpmath.mpf(self.spec)

    def value(self) -> float:
        with mpmath.workprec(self.precision_bits):
            return float(self.mpf())

    def fixed_point(self, frac_bits: int = 96) -> int:
        """floor(alpha * 2**frac_bits): the exact-integer form used by scans."""
        if isinstance(self.spec, Fraction):
            return (self.spec.numerator << frac_bits) // self.spec.denominator
        with mpmath.workprec(max(self.precision_bits, frac_bits + 64)):
            return int(mpmath.floor(mpmath.ldexp(self.mpf(), frac_bits)))


def parse_target(text: str, precision_bits: int = 256) -> IrrationalTarget:
    """CLI syntax: sqrt2|golden|pi|e|dec:<digits>|rat:<u>/<v>."""
    if text in NAMED_TARGETS:
        return IrrationalTarget(text, precision_bits)
    if text.startswith("dec:"):
        return IrrationalTarget(text[4:], precision_bits)
    if text.startswith("rat:"):
        u, _, v = text[4:].partition("/")
        return IrrationalTarget(Fraction(int(u), int(v)), precision_bits)
    raise ValueError(f"cannot parse target spec {text!r}")


@dataclass(frozen=True)
class Convergent:
    """A reduced rational a/q with quality certificate |alpha - a/q| * q**2 <= 1."""

    a: int
    q: int
    quality: float

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("denominator must be positive")
        if math.gcd(self.a, self.q) != 1:
            raise ValueError(f"{self.a}/{self.q} is not reduced")
        if self.quality > 1.0 + 1e-12:
            raise ValueError(f"quality {self.quality} exceeds 1: not a convergent")


@dataclass
class ConvergentRun:
    """Convergent list plus how generation ended."""

    convergents: List[Convergent]
    truncated: bool = False  # precision horizon hit before q_max
    terminated: bool = False  # rational target: expansion is finite


def convergents(target: IrrationalTarget, q_max: int) -> ConvergentRun:
    """All continued-fraction convergents with q <= q_max, ascending q.

    A leading 0/1 (target with zero integer part) is suppressed when
    later convergents exist; it carries no approximation content.
    """
    if q_max < 1:
        raise ValueError("q_max must be at least 1")
    if target.is_rational:
        frac_target = target.spec
        seq = _rational_convergents(frac_target)
        if len(seq) > 1 and seq[0] == (0, 1):
            seq = seq[1:]
        out = []
        for a, q in seq:
            if q > q_max:
                break
            err = abs(frac_target - Fraction(a, q))
            out.append(Convergent(a=a, q=q, quality=float(err * q * q)))
        return ConvergentRun(convergents=out, terminated=True)

    horizon = mpmath.mpf(2) ** (target.precision_bits - 16)
    out = []
    truncated = terminated = False
    with mpmath.workprec(target.precision_bits):
        alpha = target.mpf()
        x = alpha
        p_prev, p_cur = 1, int(mpmath.floor(x))
        q_prev, q_cur = 0, 1
        first = True
        while True:
            if q_cur > q_max:
                break
            if mpmath.mpf(q_cur) ** 2 >= horizon:
                truncated = True
                break
            if not (first and p_cur == 0):
                err = abs(alpha - mpmath.mpf(p_cur) / q_cur)
                out.append(Convergent(a=p_cur, q=q_cur, quality=float(err * q_cur * q_cur)))
            first = False
            fpart = x - mpmath.floor(x)
            if fpart == 0:
                terminated = True  # decimal target was exactly rational
                break
            x = 1 / fpart
            a_next = int(mpmath.floor(x))
            p_prev, p_cur = p_cur, a_next * p_cur + p_prev
            q_prev, q_cur = q_cur, a_next * q_cur + q_prev
    return ConvergentRun(convergents=out, truncated=truncated, terminated=terminated)


def _rational_convergents(x: Fraction) -> List[Tuple[int, int]]:
    num, den = x.numerator, x.denominator
    coeffs = []
    while den:
        a, rem = divmod(num, den)
        coeffs.append(a)
        num, den = den, rem
    ps, qs = [1, coeffs[0]], [0, 1]
    for a in coeffs[1:]:
        ps.append(a * ps[-1] + ps[-2])
        qs.append(a * qs[-1] + qs[-2])
    return list(zip(ps[1:], qs[1:]))


def dirichlet_approx(theta: float, Q: int) -> Tuple[int, int]:
    """A reduced b/r with 1 <= r <= Q and |theta - b/r| <= 1/(r*Q).

    Works on the exact binary rational of the float, so the contract is
    checked in exact arithmetic: the last continued-fraction convergent
    with denominator <= Q always qualifies.
    """
    if Q < 1:
        raise ValueError("Q must be at least 1")
    x = Fraction(float(theta))
    best = (math.floor(x), 1)
    for a, q in _rational_convergents(x):
        if q > Q:
            break
        best = (a, q)
    b, r = best
    g = math.gcd(b, r)
    if g > 1:
        b, r = b // g, r // g
    return b, r


def min_linear_sum(N: int, U: float, alpha: float, beta: float) -> float:
    """sum_{n=1..N} min(U, 1 / ||alpha*n + beta||), compensated.

    Terms with ||alpha*n + beta|| = 0 contribute U (the cap saturates).
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    if U <= 0:
        raise ValueError("U must be positive")
    partials = []
    for a, b in chunk_bounds(0, N):
        ns = np.arange(a + 1, b + 1, dtype=np.float64)
        d = dist_nearest_array(alpha * ns + beta)
        terms = np.full_like(d, float(U))
        nz = d > 0
        terms[nz] = np.minimum(U, 1.0 / d[nz])
        partials.append(math.fsum(terms.tolist()))
    return math.fsum(partials)


def karatsuba_bound(N: int, U: float, q: int) -> float:
    """The capped-sum majorant N*U/q + U + (N+q)*log(q).

    log(q) degenerates at q = 1, so log(max(q, 2)) is used there.
    """
    if q < 1:
        raise ValueError("q must be positive")
    return N * U / q + U + (N + q) * math.log(max(q, 2))
