import cmath
import math
import warnings
from fractions import Fraction

import numpy as np
import pytest

from psmod1.fourier import (
    E_H_envelope,
    M_H,
    SawtoothExpansion,
    WindowParams,
    envelope_g,
    envelope_g_grid,
    min_product_sum,
    psi_truncated,
    psi_truncated_grid,
    window_expansion_envelope,
    window_expansion_envelope_grid,
    window_expansion_main,
    window_expansion_main_grid,
    window_F,
    window_F_grid,
    zhai_bound,
)
from psmod1.psset import GammaPair, GammaRangeWarning
from psmod1.realnum import sawtooth


def exploratory(g1, g2):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", GammaRangeWarning)
        return GammaPair(g1, g2, mode="exploratory")


def test_psi_truncated_vanishing_points():
    for H in (2.0, 10.0, 1000.0):
        assert psi_truncated(0.5, H) == pytest.approx(0.0, abs=1e-12)
        assert psi_truncated(0.0, H) == pytest.approx(0.0, abs=1e-12)
    # at theta = 0 the residual saturates the envelope: sawtooth(0) = -1/2
    assert abs(sawtooth(0.0) - psi_truncated(0.0, 10.0)) <= 2 * envelope_g(0.0, 10.0)


def test_psi_truncated_close_to_sawtooth():
    assert abs(sawtooth(0.3) - psi_truncated(0.3, 1000.0)) <= 2 * envelope_g(0.3, 1000.0)


def test_psi_truncated_odd():
    for theta in (0.1, 0.23, 0.411):
        assert psi_truncated(-theta, 57.0) == pytest.approx(-psi_truncated(theta, 57.0), abs=1e-12)


def test_envelope_examples():
    assert envelope_g(0.0, 4.0) == 1.0
    assert envelope_g(0.5, 4.0) == 0.5
    assert envelope_g(0.25, 100.0) == pytest.approx(0.04)
    with pytest.raises(ValueError):
        envelope_g(0.3, 1.0)


def test_sawtooth_expansion_wrapper():
    exp = SawtoothExpansion(H=100.0)
    assert exp.truncation(0.3) == psi_truncated(0.3, 100.0)
    assert exp.envelope(0.3) == envelope_g(0.3, 100.0)
    with pytest.raises(ValueError):
        SawtoothExpansion(H=1.0)


def test_M_H_empty_below_one():
    assert M_H(10, 0.75, 0.5) == 0.0


def test_M_H_two_term_hand_formula():
    # H=1: единственная pair h=+-1 reduces to an explicit two-term expression
    n, gamma = 10, 0.75
    x0, x1 = n**gamma, (n + 1) ** gamma
    # h = +1 and h = -1 terms of -sum e(-h*x1)-e(-h*x0) over 2*pi*i*h
    hand = (
        -(cmath.exp(-2j * cmath.pi * x1) - cmath.exp(-2j * cmath.pi * x0)) / (2j * cmath.pi)
        - (cmath.exp(2j * cmath.pi * x1) - cmath.exp(2j * cmath.pi * x0)) / (-2j * cmath.pi)
    )
    assert abs(hand.imag) < 1e-12
    assert M_H(n, gamma, 1.0) == pytest.approx(hand.real, abs=1e-10)


def test_M_H_matches_truncation_difference():
    rng = np.random.default_rng(3)
    for _ in range(25):
        n = int(rng.integers(2, 10**6))
        H = float(rng.integers(2, 500))
        gamma = float(rng.uniform(0.55, 0.999))
        expect = psi_truncated(-((n + 1) ** gamma), H) - psi_truncated(-(n**gamma), H)
        assert M_H(n, gamma, H) == pytest.approx(expect, abs=1e-10)


def test_M_H_converges_into_E_H_envelope():
    for n in (7, 100, 4097):
        for gamma in (0.75, 0.9):
            for H in (10.0, 100.0, 1000.0):
                diff = sawtooth(-((n + 1) ** gamma)) - sawtooth(-(n**gamma))
                assert abs(M_H(n, gamma, H) - diff) <= 2.0 * E_H_envelope(n, gamma, H)


def test_E_H_envelope_values():
    val = E_H_envelope(2, 1.0, 8.0)  # 2**1 and 3**1 are integers: both mins saturate
    assert val == 2.0
    big_h = E_H_envelope(10, 0.75, 1e6)
    assert big_h < 1e-4
    # exact integer power via the rational path saturates one min to 1
    assert E_H_envelope(15, Fraction(3, 4), 100.0) >= 1.0  # 16**(3/4) = 8


def test_window_indicator_cases():
    assert window_F(0.0, 0.1) == 1
    assert window_F(0.1, 0.1) == 0  # closed outside branch at the edge
    assert window_F(0.95, 0.1) == 1  # periodic wrap: -0.05 inside
    assert window_F(-0.1, 0.1) == 0
    assert window_F(0.4999, 0.5) == 1
    for theta in (0.0, 0.07, 0.3, 0.99):
        assert window_F(theta + 1.0, 0.1) == window_F(theta, 0.1)
    grid = window_F_grid(np.array([0.0, 0.1, 0.95]), 0.1)
    assert list(grid) == [1, 0, 1]


def test_window_expansion_vanishes_at_half_width():
    w = WindowParams(Delta=0.5, T=25)
    for theta in (0.0, 0.2, 0.77):
        assert window_expansion_main(theta, w) == pytest.approx(0.0, abs=1e-12)
        assert window_F(theta, 0.5) - 2 * 0.5 == pytest.approx(0.0)


def test_window_expansion_single_term():
    w = WindowParams(Delta=0.2, T=1)
    assert window_expansion_main(0.0, w) == pytest.approx(2 * math.sin(2 * math.pi * 0.2) / math.pi)


def test_window_grid_matches_scalar():
    w = WindowParams(Delta=0.1, T=37)
    thetas = np.array([0.017, 0.23, 0.5, 0.91])
    main = window_expansion_main_grid(thetas, w)
    env = window_expansion_envelope_grid(thetas, w)
    for i, t in enumerate(thetas):
        assert main[i] == pytest.approx(window_expansion_main(float(t), w), abs=1e-12)
        assert env[i] == pytest.approx(window_expansion_envelope(float(t), w), abs=1e-12)


def test_psi_envelope_constant_on_grid():
    # dense pre-build scan (2 x 1e5 offsets, H in {10,100,1000}) measured a
    # max residual/envelope ratio of 0.500; the asserted constant 2 has 4x slack
    thetas = np.arange(10_000) / 10_000
    saw = thetas - np.floor(thetas) - 0.5
    for H in (10.0, 100.0, 1000.0):
        resid = np.abs(saw - psi_truncated_grid(thetas, H))
        assert np.all(resid <= 2.0 * envelope_g_grid(thetas, H))


def test_window_envelope_constant_on_grid():
    # same pre-build scan measured C_W = 0.4902 max; asserted cap is 10
    thetas = np.arange(10_000) / 10_000
    worst = 0.0
    for delta in (0.01, 0.1, 0.25):
        for T in (10, 100):
            w = WindowParams(Delta=delta, T=T)
            resid = np.abs(
                window_F_grid(thetas, delta) - 2 * delta - window_expansion_main_grid(thetas, w)
            )
            ratio = resid / window_expansion_envelope_grid(thetas, w)
            worst = max(worst, float(np.max(ratio)))
    assert worst <= 10.0


def test_min_product_sum_limits():
    pair = GammaPair(0.99, 0.95)
    # factors vanish as H grows when no ||.|| degenerates
    small = min_product_sum(50, pair, 1e9, 1e9)
    assert small < 1e-8
    # near H = 1 every factor is at most 1: the sum is at most M
    near_one = min_product_sum(50, pair, 1.0 + 1e-9, 1.0 + 1e-9)
    assert 0.0 <= near_one <= 50.0


def test_min_product_sum_frozen_value():
    # 40-digit reference for M=1e3, gammas (0.99, 0.95), H1=H2=10, shifts 0
    pair = GammaPair(0.99, 0.95)
    got = min_product_sum(1000, pair, 10.0, 10.0)
    assert got == pytest.approx(271.35440129037294, rel=1e-10)


def test_min_product_sum_shift_grid_bounded():
    pair = GammaPair(0.99, 0.95)
    bound = zhai_bound(200, 5.0, 5.0)
    for u1 in (0.0, 0.25, 0.5, 1.0):
        for u2 in (0.0, 0.5, 0.75):
            val = min_product_sum(200, pair, 5.0, 5.0, u1, u2)
            assert 0.0 <= val <= 200.0
            assert val <= bound  # generous at this scale; recorded, not tight


def test_zhai_bound_formula():
    M, H1, H2 = 100, 4.0, 8.0
    lg = math.log(M)
    assert zhai_bound(M, H1, H2) == pytest.approx(M / 32 * lg * lg + M ** (2 / 3) * lg * lg)


def test_window_params_validation_and_faithful():
    with pytest.raises(ValueError):
        WindowParams(Delta=0.6, T=5)
    with pytest.raises(ValueError):
        WindowParams(Delta=0.1, T=0)
    pair = GammaPair(0.99, 0.95)
    with pytest.warns(UserWarning, match="clamping"):
        w = WindowParams.faithful(10**4, pair)
    assert w.Delta == 0.5
    assert w.q_choice == math.floor((10**4) ** ((12 - 6 * 0.95) / 13))
    assert w.T == math.isqrt(w.q_choice)
