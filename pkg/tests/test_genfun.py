import numpy as np
import pytest
from hypothesis import given, strategies as st

from qwalk import (Explicit, Homogeneous, PowerLaw, PowerLawModel, SingularEvaluationError, WalkKind, Zero,
                   closed_forms, doubling_check, first_return_gf, g_minus, g_plus, lambda_plus,
                   local_matrices, series_coefficients, xi_tilde_0, xi_tilde_j)
from qwalk.walk import iter_passage_weights

disk09 = st.builds(lambda r, t: 0.9 * np.sqrt(r) * np.exp(1j * t), st.floats(0, 1), st.floats(0, 2 * np.pi))


def test_zero_coins_g_vanish():
    for j in (-3, 0, 4):
        assert g_plus(Zero(), j, 0.7) == 0 and g_minus(Zero(), j, 0.7) == 0


def test_power_law_g_anchor():
    c = PowerLaw(3.0)
    assert abs(g_plus(c, 0, 0.5, tail="exact") - 1 / 13) < 1e-15
    assert abs(g_plus(c, 0, 0.5) - 1 / 13) < 1e-10


def test_env_depth_override(monkeypatch):
    monkeypatch.setenv("QWALK_DEPTH", "1")
    assert g_plus(PowerLaw(3.0), 0, 0.5) == pytest.approx(0.25 / 4)
    monkeypatch.delenv("QWALK_DEPTH")
    assert g_plus(PowerLaw(3.0), 0, 0.5) == pytest.approx(1 / 13)


def test_singular_denominator():
    with pytest.raises(SingularEvaluationError):
        xi_tilde_0(Explicit([1.0]), 1.0, "h1")


def test_first_return_examples():
    assert np.all(first_return_gf(Zero(), 2, 0.4, "d") == 0)
    c = PowerLaw(3.0)
    z = 0.5
    P, Q, R, S = local_matrices(c.gamma(0))
    f = first_return_gf(c, 0, z, "h1")
    g = g_plus(c, 0, z)
    assert np.abs(f - g * R - z * S).max() < 1e-15
    assert np.abs(f - (R / 13 + S / 2)).max() < 1e-10
    fm = first_return_gf(c, 0, z, "d", side="minus")
    assert np.abs(fm - g_minus(c, 0, z) * S).max() < 1e-15


def test_xi0_examples():
    for kind in WalkKind:
        assert np.allclose(xi_tilde_0(PowerLaw(3.0), 0.0, kind), np.eye(2))
    c, z = PowerLaw(2.0), 0.6
    g = g_plus(c, 0, z)
    assert np.allclose(xi_tilde_0(c, z, "h2"), np.diag([1 / (1 - g), 1]))


def _oracle_residual(kind, coins, N):
    hist = {n: (lo, xi) for n, lo, xi in iter_passage_weights(N, kind, coins)}
    js = range(-N, N + 1) if kind == "d" else range(N + 1)
    worst = 0.0
    for j in js:
        ms = series_coefficients(j, kind, coins, N)
        for n in range(N + 1):
            lo, xi = hist[n]
            i = j - lo
            ref = xi[i] if 0 <= i < len(xi) else np.zeros((2, 2))
            worst = max(worst, np.abs(ms.coefficient(n) - ref).max())
    return worst


@pytest.mark.parametrize("kind", ["h1", "h2", "d"])
def test_series_oracle_random(kind, rng):
    for _ in range(3):
        vals = rng.uniform(0, 0.9, 50) * np.exp(2j * np.pi * rng.uniform(size=50))
        assert _oracle_residual(kind, Explicit(vals, offset=-25), 16) < 1e-10


def test_pure_transport_series():
    ms = series_coefficients(5, "d", Zero(), 10)
    nz = [n for n in range(11) if np.abs(ms.coefficient(n)).max() > 0]
    assert nz == [5]
    assert np.allclose(series_coefficients(0, "h1", PowerLaw(3.0), 4).coefficient(0), np.eye(2))


@given(disk09, st.integers(1, 30))
def test_lambda_closed_form(z, k):
    cf = closed_forms(PowerLawModel(3.0))
    assert abs(lambda_plus(PowerLaw(3.0), k, z) - cf.lam(k, z)) < 1e-13


@given(disk09)
def test_lambda_product(z):
    r = 3.0
    c, cf = PowerLaw(r), closed_forms(PowerLawModel(r))
    prod = 1.0
    for j in range(1, 21):
        prod = prod * lambda_plus(c, j, z)
        assert abs(prod - cf.lam_product(j, z)) < 1e-12


@given(disk09)
def test_lambda_product_rational_form(z):
    # this rational form equals -sqrt((r+1)/r) times the product of j-1 factors
    r = 3.0
    c = PowerLaw(r)
    prod = 1.0
    for j in range(1, 21):
        rational = (1 + 1 / r) / (z * z - (r + 1) / r) * (
            np.sqrt((r + j) / (r + j - 1)) - z * z * np.sqrt((r + j - 1) / (r + j))) * z ** (j - 1)
        assert abs(rational + np.sqrt((r + 1) / r) * prod) < 1e-12
        prod = prod * lambda_plus(c, j, z)


@given(disk09)
def test_h1_denominator_rational_form(z):
    r = 3.0
    c = PowerLaw(r)
    g0 = c.gamma(0)
    den = 1 - np.conj(g0) * z + (g0 - z) * g_plus(c, 0, z)
    assert abs(1 / den - closed_forms(PowerLawModel(r)).h1_prefactor(z)) < 1e-12


@given(disk09)
def test_depth_stability(z):
    c = PowerLaw(3.0)
    errs = [abs(g_plus(c, 0, z, depth=J) - g_plus(c, 0, z, depth=2 * J)) for J in (2, 4, 8, 16, 32)]
    assert all(b <= a + 1e-16 for a, b in zip(errs, errs[1:]))


@given(disk09)
def test_closed_form_g(z):
    r = 3.0
    c, cf = PowerLaw(r), closed_forms(PowerLawModel(r))
    for j in (0, 7, 23, 50):
        assert abs(g_plus(c, j, z, tail="exact") - cf.g(j, z)) < 1e-12
        assert abs(g_plus(c, j, z, depth=200) - cf.g(j, z)) < 1e-8


def test_doubling_examples():
    assert doubling_check(PowerLaw(3.0), 0, 0.0) == 0
    assert doubling_check(PowerLaw(3.0), 2, 0.4) < 1e-10
    assert doubling_check(Homogeneous(0.5), 1, 0.3j) < 1e-10


@given(st.integers(0, 2**32 - 1), disk09, st.integers(0, 6))
def test_doubling_random(seed, z, j):
    rng = np.random.default_rng(seed)
    vals = rng.uniform(0, 0.9, 40) * np.exp(2j * np.pi * rng.uniform(size=40))
    assert doubling_check(Explicit(vals), j, z) < 1e-10


def test_xi_j_negative_half_line_zero():
    assert np.all(xi_tilde_j(PowerLaw(3.0), 0.3, -2, "h1") == 0)
