import numpy as np
import pytest
from hypothesis import given, strategies as st

from qwalk import (DomainError, Doubled, Explicit, Homogeneous, Interleaved, PowerLaw, Reindexed, Zero,
                   build_coin, local_matrices, rho_of, theta_block)

unit_disk = st.builds(lambda r, t: r * np.exp(1j * t), st.floats(0, 1), st.floats(0, 2 * np.pi))


def test_identity_coin():
    assert np.array_equal(build_coin(0), np.eye(2))


def test_coin_one_third():
    h = build_coin(1 / 3)
    r = np.sqrt(8) / 3
    assert np.allclose(h, [[r, 1 / 3], [-1 / 3, r]], atol=1e-15)


def test_reflecting_coin():
    assert np.allclose(build_coin(-1), [[0, -1], [1, 0]])


def test_coin_domain_error():
    with pytest.raises(DomainError):
        build_coin(1.01)


@given(unit_disk)
def test_coin_unitary_det_one(g):
    h = build_coin(g)
    assert np.abs(h.conj().T @ h - np.eye(2)).max() < 1e-14
    assert abs(np.linalg.det(h) - 1) < 1e-14


@given(unit_disk)
def test_rho_identity(g):
    assert abs(rho_of(g) ** 2 + abs(g) ** 2 - 1) < 1e-14


@given(unit_disk)
def test_local_matrices_split(g):
    P, Q, R, S = local_matrices(g)
    h = build_coin(g)
    assert np.allclose(P + Q, h)
    assert np.all(P[1] == 0) and np.all(Q[0] == 0)
    assert np.array_equal(R[0], Q[1]) and np.array_equal(S[1], P[0])


@given(unit_disk)
def test_theta_block(g):
    t = theta_block(g)
    assert np.abs(t.conj().T @ t - np.eye(2)).max() < 1e-14
    assert t[0, 1] == t[1, 0]


def test_power_law_values():
    c = PowerLaw(3.0)
    assert c.gamma(0) == pytest.approx(1 / 3)
    assert c.gamma(5) == pytest.approx(1 / 8)
    assert c.gamma(-2) == c.gamma(2)
    assert np.allclose(c.gammas(np.arange(4)), 1 / (3 + np.arange(4)))
    with pytest.raises(DomainError):
        PowerLaw(1.0)


@pytest.mark.parametrize("z", [0.3, 0.5j, -0.7 + 0.2j])
def test_exact_tails_match_recursion(z):
    from qwalk import schur_eval

    for seq in (PowerLaw(2.5), Homogeneous(0.4 + 0.3j), Interleaved(PowerLaw(3.0)), Interleaved(Homogeneous(-0.5))):
        for k in (0, 1, 4):
            exact = seq.schur_tail(k, z)
            approx = schur_eval(seq, k, z, depth=400, tail="zero")
            assert abs(exact - approx) < 1e-12


def test_sequence_views():
    base = PowerLaw(3.0)
    inter = Interleaved(base)
    assert [inter.gamma(k) for k in range(4)] == [base.gamma(0), 0, base.gamma(1), 0]
    shifted = Reindexed(base, start=1)
    assert shifted.gamma(0) == base.gamma(1)
    mirror = Reindexed(Explicit([0.1, 0.2], offset=-2), start=-1, step=-1, negate=True)
    assert mirror.gamma(0) == -0.2 and mirror.gamma(1) == -0.1
    d = Doubled(base)
    assert d.gamma(4) == base.gamma(2) and d.gamma(3) == 0 and d.gamma(-1) == -1
    assert Zero().gamma(7) == 0
    e = Explicit([0.5, 1.0])
    assert e.gamma(1) == 1.0 and e.gamma(9) == 0
    with pytest.raises(DomainError):
        Explicit([1.5])
