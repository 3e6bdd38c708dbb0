"""Exponential sums over primes and their bilinear decompositions.

All sums share one phase evaluator: for integer n the phase is
alpha_t*n + h1*n**g1 + h2*n**g2, reduced modulo one before the complex
exponential.  The decomposition path multiplies factors back into the
integer n before powering, so a decomposed sum reproduces the direct sum
bit-for-bit up to summation order.

Theoretical bounds are constant-free exponent evaluations; ratios
modulus/bound are recorded as diagnostics and never asserted, since the
estimates hide implicit constants and hold only asymptotically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ._parallel import ordered_map
from .psset import GammaPair
from .sieve import ArithmeticTables

EPSILON_DEFAULT = 0.01

TWO_PI_I = 2j * np.pi


@dataclass(frozen=True)
class HarmonicParams:
    """Frequency multiplier t, power-phase multipliers h1/h2, and the base phase."""

    t: int
    h1: int
    h2: int
    alpha: float
    pair: GammaPair

    def alpha_t(self) -> float:
        return self.alpha * self.t

    def h_limits(self, N: int, epsilon: float = EPSILON_DEFAULT) -> Tuple[float, float]:
        """Admissible |h1|, |h2| ceilings N**(1-gamma_i+theta-eps/3) at scale N."""
        theta = self.pair.theta()
        e3 = epsilon / 3.0
        return (
            N ** (1.0 - float(self.pair.gamma1) + theta - e3),
            N ** (1.0 - float(self.pair.gamma2) + theta - e3),
        )

    def check_faithful(self, N: int, epsilon: float = EPSILON_DEFAULT) -> bool:
        """Whether 1 <= |h_i| <= the admissible ceiling for both multipliers."""
        lim1, lim2 = self.h_limits(N, epsilon)
        return 1 <= abs(self.h1) <= lim1 and 1 <= abs(self.h2) <= lim2

    def r_star(self, N: int) -> float:
        """|h1|*N**gamma1 + |h2|*N**gamma2, the combined phase amplitude at scale N."""
        return abs(self.h1) * N ** float(self.pair.gamma1) + abs(self.h2) * N ** float(
            self.pair.gamma2
        )


@dataclass(frozen=True)
class TypeIIConfig:
    """Shift depth for the differenced bilinear estimate.

    Q defaults to floor(N**((7-2*(gamma1+gamma2))/19 - 2*eps)) when built
    through :meth:`faithful`.
    """

    Q: int
    epsilon: float = EPSILON_DEFAULT

    def __post_init__(self):
        if self.Q < 1:
            raise ValueError("Q must be at least 1")

    @classmethod
    def faithful(cls, N: int, pair: GammaPair, epsilon: float = EPSILON_DEFAULT) -> "TypeIIConfig":
        q = math.floor(N ** ((7.0 - 2.0 * pair.gamma_sum) / 19.0 - 2.0 * epsilon))
        q = max(1, min(q, N - 1))
        return cls(Q=q, epsilon=epsilon)


@dataclass
class ExpSumReport:
    """A computed sum value with its bookkeeping and optional bound diagnostics."""

    value: complex
    n_terms: int
    weight_sum: float  # sum of |weights|
    max_weight: float
    modulus: float = 0.0
    theoretical_bound: Optional[float] = None
    ratio: Optional[float] = None
    r_star: Optional[float] = None
    r_value: Optional[float] = None
    params_echo: Dict = field(default_factory=dict)

    def __post_init__(self):
        self.modulus = abs(self.value)
        cap = min(self.n_terms * self.max_weight, self.weight_sum)
        if self.modulus > cap * (1.0 + 1e-9) + 1e-9:
            raise ValueError(
                f"triangle inequality violated: |value|={self.modulus} exceeds "
                f"min(n_terms*max_weight, weight_sum)={cap}"
            )
        if self.theoretical_bound is not None and self.ratio is None:
            self.ratio = self.modulus / self.theoretical_bound if self.theoretical_bound else None


def bilinear_bound(N: float, pair: GammaPair, epsilon: float = EPSILON_DEFAULT) -> float:
    """Constant-free bilinear exponent evaluation N**((31+2*(g1+g2))/38 + eps)."""
    return N ** ((31.0 + 2.0 * pair.gamma_sum) / 38.0 + epsilon)


def _phase_fracs(
    n: np.ndarray, alpha_t: float, h1: float, g1: float, h2: float, g2: float
) -> np.ndarray:
    """Fractional parts of alpha_t*n + h1*n**g1 + h2*n**g2 over an int64 array."""
    nf = n.astype(np.float64)
    x = alpha_t * nf
    if h1 != 0.0:
        x = x + h1 * np.power(nf, g1)
    if h2 != 0.0:
        x = x + h2 * np.power(nf, g2)
    return x - np.floor(x)


def _weighted_phase_sum(
    n: np.ndarray, weights: np.ndarray, alpha_t: float, h1: float, g1: float, h2: float, g2: float
) -> complex:
    fr = _phase_fracs(n, alpha_t, h1, g1, h2, g2)
    terms = weights * np.exp(TWO_PI_I * fr)
    return complex(math.fsum(terms.real.tolist()), math.fsum(terms.imag.tolist()))


def linear_prime_sum(
    N: int,
    alpha: float,
    tables: ArithmeticTables,
    q: Optional[int] = None,
) -> ExpSumReport:
    """sum_{n<=N} Lambda(n) e(n*alpha), with the classical major/minor-arc
    bound (N*q**-0.5 + N**0.8 + (N*q)**0.5) * log(N)**4 attached when a
    certified convergent denominator q is supplied.
    """
    if N > tables.limit:
        raise ValueError(f"N={N} exceeds table limit {tables.limit}")
    ns, weights = tables.lambda_support(1, N)
    if ns.size == 0:
        value = 0.0 + 0.0j
    else:
        value = _weighted_phase_sum(ns, weights, alpha, 0.0, 1.0, 0.0, 1.0)
    bound = None
    if q is not None and N >= 2:
        bound = (N / math.sqrt(q) + N**0.8 + math.sqrt(N * q)) * math.log(N) ** 4
    return ExpSumReport(
        value=value,
        n_terms=int(ns.size),
        weight_sum=float(np.sum(np.abs(weights))) if ns.size else 0.0,
        max_weight=float(np.max(weights)) if ns.size else 0.0,
        theoretical_bound=bound,
        params_echo={"N": N, "alpha": alpha, "q": q},
    )


def segment_phase_sum(
    M: int,
    M1: int,
    alpha: float,
    a: float,
    b: float,
    pair: GammaPair,
    with_bound: bool = True,
) -> ExpSumReport:
    """sum_{M<m<=M1} e(alpha*m + a*m**gamma1 + b*m**gamma2) over a dyadic block,
    with the uniform bound R**(1/2) + M*R**(-1/3), R = |a|*M**g1 + |b|*M**g2."""
    if not M < M1 <= 2 * M:
        raise ValueError(f"need M < M1 <= 2M, got M={M}, M1={M1}")
    if with_bound and a * b == 0.0:
        raise ValueError("a*b must be nonzero for the bound to apply")
    ms = np.arange(M + 1, M1 + 1, dtype=np.int64)
    g1, g2 = float(pair.gamma1), float(pair.gamma2)
    value = _weighted_phase_sum(ms, np.ones(ms.size), alpha, a, g1, b, g2)
    bound = r = None
    if with_bound:
        r = abs(a) * M**g1 + abs(b) * M**g2
        bound = math.sqrt(r) + M * r ** (-1.0 / 3.0)
    return ExpSumReport(
        value=value,
        n_terms=int(ms.size),
        weight_sum=float(ms.size),
        max_weight=1.0,
        theoretical_bound=bound,
        r_value=r,
        params_echo={"M": M, "M1": M1, "alpha": alpha, "a": a, "b": b},
    )


def _validate_coeffs(coeffs: np.ndarray, name: str) -> np.ndarray:
    arr = np.asarray(coeffs, dtype=np.complex128)
    if arr.size and not np.all(np.isfinite(arr.real) & np.isfinite(arr.imag)):
        raise ValueError(f"{name} contains non-finite entries: coefficients must be bounded")
    return arr


def _bilinear_core(
    m_vals: np.ndarray,
    a: np.ndarray,
    k_vals: np.ndarray,
    b: np.ndarray,
    alpha_t: float,
    h1: float,
    g1: float,
    h2: float,
    g2: float,
    product_window: Optional[Tuple[int, int]] = None,
) -> Tuple[complex, int, float, float]:
    """Windowed bilinear sum  sum_{m,k} a(m) b(k) e(phase(m*k)).

    Phases are computed from the integer products m*k so that regrouped
    evaluations reproduce a direct sum over n = m*k exactly.
    Returns (value, n_terms, weight_sum, max_weight).
    """
    keep_m = np.flatnonzero(a != 0)
    keep_k = np.flatnonzero(b != 0)
    if keep_m.size == 0 or keep_k.size == 0:
        return 0j, 0, 0.0, 0.0
    m_vals, a = m_vals[keep_m], a[keep_m]
    k_vals, b = k_vals[keep_k], b[keep_k]
    n = m_vals[:, None] * k_vals[None, :]
    coeff = a[:, None] * b[None, :]
    if product_window is not None:
        lo, hi = product_window
        mask = (n > lo) & (n <= hi)
        n = n[mask]
        coeff = coeff[mask]
    else:
        n = n.ravel()
        coeff = coeff.ravel()
    if n.size == 0:
        return 0j, 0, 0.0, 0.0
    fr = _phase_fracs(n, alpha_t, h1, g1, h2, g2)
    terms = coeff * np.exp(TWO_PI_I * fr)
    value = complex(math.fsum(terms.real.tolist()), math.fsum(terms.imag.tolist()))
    mags = np.abs(coeff)
    return value, int(n.size), float(np.sum(mags)), float(np.max(mags))


def type1_sum(
    coeff_a: Sequence,
    M: int,
    K: int,
    params: HarmonicParams,
    *,
    k_count: Optional[int] = None,
    k_weight: Optional[np.ndarray] = None,
    product_window: Optional[Tuple[int, int]] = None,
    epsilon: float = EPSILON_DEFAULT,
    attach_bound: bool = True,
) -> ExpSumReport:
    """Bilinear sum with arbitrary outer coefficients and a smooth inner sum:
    sum_m a(m) sum_k w(k) e(alpha*t*mk + h1*(mk)**g1 + h2*(mk)**g2).

    Canonical shape is dyadic: a over (M, 2M] and k over (K, 2K] with
    w = 1.  Decomposition callers pass general contiguous blocks, a
    product window, and (for a log-carrying smooth factor) a k_weight
    array; exact recombination is impossible without them.
    """
    a = _validate_coeffs(coeff_a, "coeff_a")
    kc = K if k_count is None else k_count
    m_vals = np.arange(M + 1, M + a.size + 1, dtype=np.int64)
    k_vals = np.arange(K + 1, K + kc + 1, dtype=np.int64)
    if k_weight is None:
        b = np.ones(k_vals.size, dtype=np.complex128)
    else:
        b = _validate_coeffs(k_weight, "k_weight")
        if b.size != k_vals.size:
            raise ValueError("k_weight length must match the inner range")
    g1, g2 = float(params.pair.gamma1), float(params.pair.gamma2)
    value, n_terms, wsum, wmax = _bilinear_core(
        m_vals, a, k_vals, b, params.alpha_t(), params.h1, g1, params.h2, g2, product_window
    )
    bound = rs = None
    if attach_bound:
        n_scale = 2 * M * K
        if n_scale >= 2 and M <= n_scale**0.25:
            bound = bilinear_bound(n_scale, params.pair, epsilon)
        rs = params.r_star(n_scale) if n_scale >= 1 else None
    return ExpSumReport(
        value=value,
        n_terms=n_terms,
        weight_sum=wsum,
        max_weight=wmax,
        theoretical_bound=bound,
        r_star=rs,
        params_echo={"M": M, "K": K, "t": params.t, "h1": params.h1, "h2": params.h2},
    )


def type2_sum(
    coeff_a: Sequence,
    coeff_b: Sequence,
    M: int,
    K: int,
    params: HarmonicParams,
    *,
    product_window: Optional[Tuple[int, int]] = None,
    config: Optional[TypeIIConfig] = None,
    attach_bound: bool = True,
) -> ExpSumReport:
    """Bilinear sum with arbitrary bounded coefficients on both sides.

    Canonical shape is dyadic: a over (M, 2M] and b over (K, 2K]; the
    exponent bound is attached when K sits in [N**0.25, N**0.5] at scale
    N = 2MK.
    """
    a = _validate_coeffs(coeff_a, "coeff_a")
    b = _validate_coeffs(coeff_b, "coeff_b")
    m_vals = np.arange(M + 1, M + a.size + 1, dtype=np.int64)
    k_vals = np.arange(K + 1, K + b.size + 1, dtype=np.int64)
    g1, g2 = float(params.pair.gamma1), float(params.pair.gamma2)
    value, n_terms, wsum, wmax = _bilinear_core(
        m_vals, a, k_vals, b, params.alpha_t(), params.h1, g1, params.h2, g2, product_window
    )
    epsilon = config.epsilon if config is not None else EPSILON_DEFAULT
    bound = rs = None
    if attach_bound:
        n_scale = 2 * M * K
        if n_scale >= 2 and n_scale**0.25 <= K <= n_scale**0.5:
            bound = bilinear_bound(n_scale, params.pair, epsilon)
        rs = params.r_star(n_scale) if n_scale >= 1 else None
    return ExpSumReport(
        value=value,
        n_terms=n_terms,
        weight_sum=wsum,
        max_weight=wmax,
        theoretical_bound=bound,
        r_star=rs,
        params_echo={"M": M, "K": K, "t": params.t, "h1": params.h1, "h2": params.h2},
    )


def gamma_star(
    N: int,
    params: HarmonicParams,
    tables: ArithmeticTables,
    *,
    epsilon: float = EPSILON_DEFAULT,
    attach_bound: bool = True,
) -> ExpSumReport:
    """sum_{N/2<n<=N} Lambda(n) e(alpha*t*n + h1*n**g1 + h2*n**g2)."""
    if N > tables.limit:
        raise ValueError(f"N={N} exceeds table limit {tables.limit}")
    ns, weights = tables.lambda_support(N // 2, N)
    g1, g2 = float(params.pair.gamma1), float(params.pair.gamma2)
    if ns.size == 0:
        value = 0j
    else:
        value = _weighted_phase_sum(ns, weights, params.alpha_t(), params.h1, g1, params.h2, g2)
    bound = None
    if attach_bound and N >= 2:
        bound = N ** ((31.0 + 2.0 * params.pair.gamma_sum) / 38.0 + 7.0 * epsilon / 6.0)
    return ExpSumReport(
        value=value,
        n_terms=int(ns.size),
        weight_sum=float(np.sum(np.abs(weights))) if ns.size else 0.0,
        max_weight=float(np.max(weights)) if ns.size else 0.0,
        theoretical_bound=bound,
        r_star=params.r_star(N),
        params_echo={"N": N, "t": params.t, "h1": params.h1, "h2": params.h2},
    )


# ---------------------------------------------------------------------------
# Heath-Brown expansion of Lambda and the dyadic case machinery
# ---------------------------------------------------------------------------


_divisor_cache: Dict[int, Tuple[int, ...]] = {}


def _divisors(n: int, tables: ArithmeticTables) -> Tuple[int, ...]:
    cached = _divisor_cache.get(n)
    if cached is not None:
        return cached
    divs = [1]
    for p, e in tables.factorize(n):
        divs = [d * p**i for d in divs for i in range(e + 1)]
    out = tuple(sorted(divs))
    if len(_divisor_cache) < 1 << 20:
        _divisor_cache[n] = out
    return out


def heath_brown_terms(n: int, z: int, k: int, tables: ArithmeticTables) -> float:
    """Right-hand side of the Heath-Brown identity for Lambda(n):

        sum_{j=1..k} (-1)**(j-1) C(k,j)
            sum_{n1*...*n_{2j} = n, n_{j+1..2j} <= z} log(n1) mu(n_{j+1})...mu(n_{2j})

    by exhaustive enumeration of ordered factorizations.  Exact (up to log
    arithmetic) for every n <= 2*z**k.
    """
    n, z, k = int(n), int(z), int(k)
    if k < 1 or z < 1:
        raise ValueError("need z >= 1 and k >= 1")
    if n < 1:
        raise ValueError("n must be positive")
    if n > 2 * z**k:
        raise ValueError(f"identity hypothesis violated: n={n} > 2*z**k={2 * z**k}")
    if max(n, z) > tables.limit:
        raise ValueError("tables too small for the requested enumeration")

    total = 0.0
    for j in range(1, k + 1):
        sign = (-1) ** (j - 1) * math.comb(k, j)
        total += sign * _hb_inner(n, j, z, tables)
    return total


def _hb_inner(n: int, j: int, z: int, tables: ArithmeticTables) -> float:
    """sum over ordered tuples (n1..n_{2j}) with product n, last j factors <= z,
    of log(n1) * prod mu; n1 is recovered as the leftover factor."""
    acc = 0.0

    def mu_slots(rem: int, depth: int, mu_prod: int):
        nonlocal acc
        if depth == 0:
            plain_slots(rem, j - 1, mu_prod)
            return
        for d in _divisors(rem, tables):
            if d > z:
                break
            m = tables.mobius(d)
            if m == 0:
                continue
            mu_slots(rem // d, depth - 1, mu_prod * m)

    def plain_slots(rem: int, depth: int, mu_prod: int):
        nonlocal acc
        if depth == 0:
            if rem > 1:
                acc += mu_prod * math.log(rem)
            return
        for d in _divisors(rem, tables):
            plain_slots(rem // d, depth - 1, mu_prod)

    mu_slots(n, j, 1)
    return acc


def case_split(
    factor_ranges: Sequence[float], N: Optional[float] = None
) -> Tuple[int, Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Classify a six-factor dyadic box and split its slots into the outer
    (m) and inner (k) sides of a bilinear sum.

    factor_ranges are the dyadic lower edges N_1..N_6; N defaults to
    their product.  First applicable case wins:

      1. some N_j >= N**(3/4) with j <= 3: that slot is the smooth inner side;
      2. some N_j in [N**(1/4), N**(1/2)]: that slot is the inner side;
      3. some N_j in [N**(1/2), N**(3/4)]: that slot is the outer side;
      4. all slots below N**(1/4): sort descending and take the shortest
         prefix whose product reaches N**(1/4) as the inner side.

    Returns (case, (m_indices, k_indices)) with 0-based slot indices.
    """
    edges = tuple(float(x) for x in factor_ranges)
    if len(edges) != 6:
        raise ValueError("exactly six factor ranges are required")
    if any(e < 1.0 for e in edges):
        raise ValueError("factor ranges must be at least 1")
    prod = math.prod(edges)
    scale = prod if N is None else float(N)
    if scale <= 1.0:
        raise ValueError("scale N must exceed 1")
    if not (scale / 16384.0 <= prod <= 2.0 * scale):
        raise ValueError(
            f"factor ranges (product {prod:g}) incompatible with scale N={scale:g}"
        )
    cap = (2.0 * scale) ** (1.0 / 3.0)
    for i in (3, 4, 5):
        if edges[i] > cap * (1.0 + 1e-12):
            raise ValueError(
                f"slot {i + 1} range {edges[i]:g} exceeds the cube-root cap {cap:g}"
            )

    q1, q2, q3 = scale**0.25, scale**0.5, scale**0.75
    all_idx = set(range(6))
    for j in range(3):
        if edges[j] >= q3:
            k_side = (j,)
            return 1, (tuple(sorted(all_idx - {j})), k_side)
    for j in range(6):
        if q1 <= edges[j] <= q2:
            return 2, (tuple(sorted(all_idx - {j})), (j,))
    for j in range(6):
        if q2 <= edges[j] <= q3:
            return 3, ((j,), tuple(sorted(all_idx - {j})))
    order = sorted(range(6), key=lambda i: (-edges[i], i))
    acc = 1.0
    prefix: List[int] = []
    for idx in order:
        prefix.append(idx)
        acc *= edges[idx]
        if acc >= q1:
            break
    k_side = tuple(sorted(prefix))
    return 4, (tuple(sorted(all_idx - set(k_side))), k_side)


# -- dyadic box enumeration for the decomposition ---------------------------


def _dyadic_cells(max_val: int) -> List[Tuple[int, int]]:
    """Cells (0,1], (1,2], (2,4], ... covering [1, max_val]."""
    cells = [(0, 1)]
    lo = 1
    while lo < max_val:
        hi = min(2 * lo, max_val)
        cells.append((lo, hi))
        lo = 2 * lo
    return cells


class _Support:
    """Dense coefficient array over a contiguous integer range (base, base+len]."""

    __slots__ = ("base", "arr")

    def __init__(self, base: int, arr: np.ndarray):
        self.base = base  # values are base+1 .. base+len(arr)
        self.arr = arr

    @classmethod
    def unit(cls) -> "_Support":
        return cls(0, np.ones(1, dtype=np.float64))

    def values(self) -> np.ndarray:
        return np.arange(self.base + 1, self.base + self.arr.size + 1, dtype=np.int64)

    def convolve(self, other: "_Support") -> "_Support":
        a, b = self, other
        if a.arr.size > b.arr.size:
            a, b = b, a
        lo = (a.base + 1) * (b.base + 1)
        hi = (a.base + a.arr.size) * (b.base + b.arr.size)
        out = np.zeros(hi - lo + 1, dtype=np.float64)
        b_lo = b.base + 1
        b_hi = b.base + b.arr.size
        for i in np.flatnonzero(a.arr):
            v = a.base + 1 + int(i)
            w = a.arr[i]
            out[v * b_lo - lo : v * b_hi - lo + 1 : v] += w * b.arr
        return _Support(lo - 1, out)


def _slot_support(cell: Tuple[int, int], kind: str, tables: ArithmeticTables) -> _Support:
    lo, hi = cell
    vals = np.arange(lo + 1, hi + 1, dtype=np.int64)
    if kind == "log":
        arr = np.log(vals.astype(np.float64))
        if lo == 0:
            arr[0] = 0.0  # log 1
    elif kind == "plain":
        arr = np.ones(vals.size, dtype=np.float64)
    elif kind == "mu":
        arr = tables.mu[vals].astype(np.float64)
    else:
        raise ValueError(kind)
    return _Support(lo, arr)


def _enumerate_boxes(slot_cells: List[List[Tuple[int, int]]], window: Tuple[int, int]):
    """All cell combinations whose value-product range can meet (lo, hi]."""
    lo_win, hi_win = window
    n_slots = len(slot_cells)
    rem_max = [1] * (n_slots + 1)
    for i in range(n_slots - 1, -1, -1):
        rem_max[i] = rem_max[i + 1] * max(hi for _, hi in slot_cells[i])

    out: List[Tuple[Tuple[int, int], ...]] = []
    box: List[Tuple[int, int]] = []

    def rec(i: int, min_prod: int, max_prod: int):
        if min_prod > hi_win:
            return
        if max_prod * rem_max[i] <= lo_win:
            return
        if i == n_slots:
            out.append(tuple(box))
            return
        for cell in slot_cells[i]:
            clo, chi = cell
            box.append(cell)
            rec(i + 1, min_prod * (clo + 1), max_prod * chi)
            box.pop()

    rec(0, 1, 1)
    return out


def gamma_star_decomposed(
    N: int,
    params: HarmonicParams,
    tables: ArithmeticTables,
    z: Optional[int] = None,
    threads: int = 1,
) -> complex:
    """Evaluate the half-dyadic prime-power phase sum by expanding Lambda
    through the three-fold Heath-Brown identity, grouping factorizations
    into dyadic boxes, routing each box through :func:`case_split`, and
    recombining the resulting bilinear evaluations.

    Mathematically identical to gamma_star(N, ...).value; numerically the
    two agree to summation-order rounding.
    """
    if z is None:
        z = max(2, math.ceil((N / 2.0) ** (1.0 / 3.0)))
    if N > 2 * z**3:
        raise ValueError(f"need N <= 2*z**3, got N={N}, z={z}")
    if z**3 > 2 * N:
        # oversize z would push Mobius-side dyadic cells past the cube-root
        # cap the case machinery assumes; the canonical z always fits
        raise ValueError(f"z={z} too large for the case split: need z**3 <= 2*N")
    if z > tables.limit:
        raise ValueError("tables too small for the Mobius factors")
    window = (N // 2, N)
    support_cache: Dict[Tuple[Tuple[int, int], str], _Support] = {}

    jobs = []
    for j in (1, 2, 3):
        sign = (-1) ** (j - 1) * math.comb(3, j)
        # slot template: 0 = log slot, 1..2 = plain, 3..5 = Mobius-weighted
        kinds = ["log", "plain", "plain", "mu", "mu", "mu"]
        active_plain = j - 1
        active_mu = j
        slot_cells: List[List[Tuple[int, int]]] = []
        for idx, kind in enumerate(kinds):
            if kind == "log":
                slot_cells.append(_dyadic_cells(N))
            elif kind == "plain":
                pos = idx - 1
                slot_cells.append(_dyadic_cells(N) if pos < active_plain else [(0, 1)])
            else:
                pos = idx - 3
                slot_cells.append(_dyadic_cells(z) if pos < active_mu else [(0, 1)])
        for box in _enumerate_boxes(slot_cells, window):
            jobs.append((sign, kinds, box))

    def slot_support(cell: Tuple[int, int], kind: str) -> _Support:
        key = (cell, kind)
        sup = support_cache.get(key)
        if sup is None:
            sup = _slot_support(cell, kind, tables)
            support_cache[key] = sup
        return sup

    def eval_box(job) -> complex:
        sign, kinds, box = job
        edges = tuple(max(1, lo) for lo, _ in box)
        case, (m_idx, k_idx) = case_split(edges, N=N)
        supports = [slot_support(box[i], kinds[i]) for i in range(6)]
        m_sup = _Support.unit()
        for i in m_idx:
            m_sup = m_sup.convolve(supports[i])
        k_sup = _Support.unit()
        for i in k_idx:
            k_sup = k_sup.convolve(supports[i])
        if case == 1:
            # the single smooth factor may carry the log weight
            k_weight = k_sup.arr if kinds[k_idx[0]] == "log" else None
            rep = type1_sum(
                m_sup.arr,
                m_sup.base,
                k_sup.base,
                params,
                k_count=k_sup.arr.size,
                k_weight=k_weight,
                product_window=window,
                attach_bound=False,
            )
        else:
            rep = type2_sum(
                m_sup.arr,
                k_sup.arr,
                m_sup.base,
                k_sup.base,
                params,
                product_window=window,
                attach_bound=False,
            )
        return sign * rep.value

    parts = ordered_map(eval_box, jobs, threads)
    return complex(
        math.fsum(p.real for p in parts),
        math.fsum(p.imag for p in parts),
    )


def weyl_shift_check(z: Sequence[complex], Q: int) -> Tuple[float, float, bool]:
    """Both sides of the shift-correlation inequality

        |sum z_l|**2 <= (2 + L/Q) * sum_{|q|<=Q} (1-|q|/Q) *
                        sum_{L<l+q, l-q<=2L} z_{l+q} conj(z_{l-q})

    for a sequence indexed over (L, 2L] with L = len(z).  The symmetric
    q-sum is real, so the right side is reported via its real part.
    """
    arr = np.asarray(z, dtype=np.complex128)
    L = arr.size
    if L < 1 or Q < 1:
        raise ValueError("need L >= 1 and Q >= 1")
    lhs = abs(np.sum(arr)) ** 2
    total = 0j
    for q in range(-Q, Q + 1):
        weight = 1.0 - abs(q) / Q
        aq = abs(q)
        if weight == 0.0 or L - 2 * aq <= 0:
            continue
        # l runs over (L+|q|, 2L-|q|]; with index i = l-L-1 in [aq, L-aq)
        if q >= 0:
            seg = arr[2 * aq : L] * np.conj(arr[0 : L - 2 * aq])
        else:
            seg = arr[0 : L - 2 * aq] * np.conj(arr[2 * aq : L])
        total += weight * np.sum(seg)
    rhs = (2.0 + L / Q) * total.real
    return float(lhs), float(rhs), bool(lhs <= rhs * (1.0 + 1e-9))
