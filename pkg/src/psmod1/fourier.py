"""Truncated Fourier machinery for the sawtooth and the window indicator.

The floor-removal technique trades exact sawtooth values for finite
trigonometric sums plus explicit envelopes; everything here evaluates
those sums and envelopes so tests can measure the actual approximation
constants on dense grids.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass


import numpy as np

from .psset import GammaPair
from .realnum import (
    DEFAULT_POLICY,
    GammaLike,
    PrecisionPolicy,
    dist_nearest,
    frac,
    phase_mod1,
    power_floor_array,
    pow_floor_frac,
    sawtooth,
)

_H_BLOCK = 256  # frequencies per vectorized block in grid evaluations


@dataclass(frozen=True)
class SawtoothExpansion:
    """Truncation depth H for the sawtooth's finite Fourier sum.

    The residual envelope min(1, 1/(H*dist)) itself expands into a
    Fourier series whose coefficients obey a(0) = O(log(2H)/H) and
    a(h) = O(min(1/|h|, H/h**2)); those bounds are recorded here for
    reference only and deliberately back no operation.
    """

    H: float

    def __post_init__(self):
        if not self.H > 1:
            raise ValueError("H must exceed 1")

    def truncation(self, theta: float) -> float:
        return psi_truncated(theta, self.H)

    def envelope(self, theta: float) -> float:
        return envelope_g(theta, self.H)


def psi_truncated(theta: float, H: float) -> float:
    """Finite Fourier sum approximating the centered sawtooth:
    -sum_{h=1..floor(H)} sin(2*pi*h*theta) / (pi*h).  Exactly real.
    """
    if not H > 1:
        raise ValueError("H must exceed 1")
    hmax = math.floor(H)
    hs = np.arange(1, hmax + 1, dtype=np.float64)
    phases = phase_mod1(hs * frac(theta))
    return -float(np.sum(np.sin(2.0 * np.pi * phases) / (np.pi * hs)))


def psi_truncated_grid(thetas: np.ndarray, H: float) -> np.ndarray:
    """Vectorized psi_truncated over a grid of thetas."""
    if not H > 1:
        raise ValueError("H must exceed 1")
    thetas = phase_mod1(np.asarray(thetas, dtype=np.float64))
    hmax = math.floor(H)
    out = np.zeros_like(thetas)
    for h0 in range(1, hmax + 1, _H_BLOCK):
        hs = np.arange(h0, min(h0 + _H_BLOCK, hmax + 1), dtype=np.float64)
        ph = phase_mod1(np.outer(thetas, hs))
        out -= np.sin(2.0 * np.pi * ph) @ (1.0 / (np.pi * hs))
    return out


def envelope_g(theta: float, H: float) -> float:
    """Residual envelope min(1, 1/(H*||theta||)); saturates to 1 at ||theta|| = 0."""
    if not H > 1:
        raise ValueError("H must exceed 1")
    d = dist_nearest(theta)
    if d == 0.0:
        return 1.0
    return min(1.0, 1.0 / (H * d))


def envelope_g_grid(thetas: np.ndarray, H: float) -> np.ndarray:
    thetas = np.asarray(thetas, dtype=np.float64)
    f = phase_mod1(thetas)
    d = np.minimum(f, 1.0 - f)
    out = np.ones_like(d)
    nz = d > 0
    out[nz] = np.minimum(1.0, 1.0 / (H * d[nz]))
    return out


def M_H(n: int, gamma: GammaLike, H: float, policy: PrecisionPolicy = DEFAULT_POLICY) -> float:
    """Main part of the telescoped sawtooth difference at truncation H:
    sum_{h=1..floor(H)} (sin(2 pi h (n+1)**gamma) - sin(2 pi h n**gamma)) / (pi h).

    Equals psi_truncated(-(n+1)**gamma, H) - psi_truncated(-n**gamma, H);
    evaluated independently from guarded fractional parts.
    """
    hmax = math.floor(H)
    if hmax < 1:
        return 0.0
    _, fr0 = pow_floor_frac(n, gamma, policy)
    _, fr1 = pow_floor_frac(n + 1, gamma, policy)
    hs = np.arange(1, hmax + 1, dtype=np.float64)
    s1 = np.sin(2.0 * np.pi * phase_mod1(hs * fr1))
    s0 = np.sin(2.0 * np.pi * phase_mod1(hs * fr0))
    return float(np.sum((s1 - s0) / (np.pi * hs)))


def E_H_envelope(n: int, gamma: GammaLike, H: float, policy: PrecisionPolicy = DEFAULT_POLICY) -> float:
    """Envelope for the telescoped difference:
    min(1, 1/(H*||(n+1)**gamma||)) + min(1, 1/(H*||n**gamma||)).
    """
    if not H > 1:
        raise ValueError("H must exceed 1")
    _, fr0 = pow_floor_frac(n, gamma, policy)
    _, fr1 = pow_floor_frac(n + 1, gamma, policy)
    total = 0.0
    for fr in (fr1, fr0):
        d = min(fr, 1.0 - fr)
        total += 1.0 if d == 0.0 else min(1.0, 1.0 / (H * d))
    return total


@dataclass(frozen=True)
class WindowParams:
    """Half-width, truncation depth, and the modulus behind the depth choice."""

    Delta: float
    T: int
    q_choice: int = 1

    def __post_init__(self):
        if not (0.0 < self.Delta <= 0.5):
            raise ValueError(f"Delta must lie in (0, 1/2], got {self.Delta}")
        if self.T < 1:
            raise ValueError("T must be a positive integer")
        if self.q_choice < 1:
            raise ValueError("q_choice must be a positive integer")

    @classmethod
    def faithful(cls, N: int, pair: GammaPair, epsilon: float = 0.01) -> "WindowParams":
        """Width N**(-theta+eps), modulus q = floor(N**((12-6*gamma2)/13)),
        depth T = floor(sqrt(q)).

        At desk scale the computed width usually exceeds 1/2; it is then
        clamped to 1/2 with a warning, and callers override Delta to see
        equidistribution.
        """
        g2 = float(pair.gamma2)
        delta = N ** (-pair.theta() + epsilon)
        if delta > 0.5:
            warnings.warn(
                f"faithful width {delta:.4g} exceeds 1/2 at N={N}; clamping to 0.5",
                stacklevel=2,
            )
            delta = 0.5
        q = max(1, math.floor(N ** ((12.0 - 6.0 * g2) / 13.0)))
        return cls(Delta=delta, T=max(1, math.isqrt(q)), q_choice=q)


def window_F(theta: float, Delta: float) -> int:
    """Period-1 indicator of the open interval (-Delta, Delta); boundary points
    count as outside.  Evaluated as frac(theta) < Delta or frac(theta) > 1-Delta,
    which keeps the closed boundary exact in floating point."""
    if not (0.0 < Delta <= 0.5):
        raise ValueError(f"Delta must lie in (0, 1/2], got {Delta}")
    f = frac(theta)
    return 1 if (f < Delta or f > 1.0 - Delta) else 0


def window_F_grid(thetas: np.ndarray, Delta: float) -> np.ndarray:
    f = phase_mod1(np.asarray(thetas, dtype=np.float64))
    return ((f < Delta) | (f > 1.0 - Delta)).astype(np.int64)


def window_expansion_main(theta: float, window: WindowParams) -> float:
    """Truncated Fourier sum of the centered window:
    sum_{1<=|t|<=T} sin(2 pi t Delta)/(pi t) * e(t*theta), real by pairing."""
    ts = np.arange(1, window.T + 1, dtype=np.float64)
    coeffs = np.sin(2.0 * np.pi * ts * window.Delta) / (np.pi * ts)
    return float(np.sum(coeffs * 2.0 * np.cos(2.0 * np.pi * phase_mod1(ts * frac(theta)))))


def window_expansion_main_grid(thetas: np.ndarray, window: WindowParams) -> np.ndarray:
    thetas = phase_mod1(np.asarray(thetas, dtype=np.float64))
    out = np.zeros_like(thetas)
    for t0 in range(1, window.T + 1, _H_BLOCK):
        ts = np.arange(t0, min(t0 + _H_BLOCK, window.T + 1), dtype=np.float64)
        coeffs = np.sin(2.0 * np.pi * ts * window.Delta) / (np.pi * ts)
        out += (2.0 * np.cos(2.0 * np.pi * phase_mod1(np.outer(thetas, ts)))) @ coeffs
    return out


def window_expansion_envelope(theta: float, window: WindowParams) -> float:
    """Residual envelope min(1, 1/(T*||theta+Delta||)) + min(1, 1/(T*||theta-Delta||))."""
    total = 0.0
    for shift in (window.Delta, -window.Delta):
        d = dist_nearest(theta + shift)
        total += 1.0 if d == 0.0 else min(1.0, 1.0 / (window.T * d))
    return total


def window_expansion_envelope_grid(thetas: np.ndarray, window: WindowParams) -> np.ndarray:
    thetas = np.asarray(thetas, dtype=np.float64)
    out = np.zeros_like(thetas, dtype=np.float64)
    for shift in (window.Delta, -window.Delta):
        f = phase_mod1(thetas + shift)
        d = np.minimum(f, 1.0 - f)
        term = np.ones_like(d)
        nz = d > 0
        term[nz] = np.minimum(1.0, 1.0 / (window.T * d[nz]))
        out += term
    return out


def min_product_sum(
    M: int,
    pair: GammaPair,
    H1: float,
    H2: float,
    u1: float = 0.0,
    u2: float = 0.0,
    policy: PrecisionPolicy = DEFAULT_POLICY,
) -> float:
    """sum_{M<m<=2M} prod_j min(1, 1/(H_j*||(m+u_j)**gamma_j||)) at shifts (u1, u2).

    The supremum over shifts is a theoretical device; callers sample a
    shift grid instead.  Each factor is at most 1, so the sum is at most M.
    """
    if M < 2:
        raise ValueError("M must be at least 2")
    if not (H1 > 1 and H2 > 1):
        raise ValueError("H1 and H2 must exceed 1")
    if not (0.0 <= u1 <= 1.0 and 0.0 <= u2 <= 1.0):
        raise ValueError("shifts must lie in [0, 1]")
    ms = np.arange(M + 1, 2 * M + 1, dtype=np.int64)
    total = np.ones(ms.size, dtype=np.float64)
    for gamma, H, u in ((pair.gamma1, H1, u1), (pair.gamma2, H2, u2)):
        if u == 0.0:
            _, fr, _ = power_floor_array(ms, gamma, policy)
        else:
            x = np.power(ms.astype(np.float64) + u, float(gamma))
            fr = x - np.floor(x)
        d = np.minimum(fr, 1.0 - fr)
        factor = np.ones_like(d)
        nz = d > 0
        factor[nz] = np.minimum(1.0, 1.0 / (H * d[nz]))
        total *= factor
    return math.fsum(total.tolist())


def zhai_bound(M: int, H1: float, H2: float) -> float:
    """Two-factor majorant M/(H1*H2)*(log M)**2 + M**(2/3)*(log M)**2."""
    if M < 2:
        raise ValueError("M must be at least 2")
    lg = math.log(M)
    return M / (H1 * H2) * lg * lg + M ** (2.0 / 3.0) * lg * lg
