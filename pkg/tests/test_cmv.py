import numpy as np
import pytest

from qwalk import (DomainError, Explicit, Homogeneous, PowerLaw, Zero, build_cmv, cmv_factors,
                   cmv_walk_correspondence, rho_of)


def random_seq(rng, n=300):
    return Explicit(rng.uniform(0, 0.95, n) * np.exp(2j * np.pi * rng.uniform(size=n)))


def test_free_cmv():
    c = build_cmv(Zero(), 4).to_dense()
    assert np.all(np.isin(np.round(np.abs(c), 12), [0.0, 1.0]))
    assert np.allclose(np.abs(c).sum(axis=0)[:-2], 1)


def test_top_left_block():
    seq = Explicit([0.3 + 0.1j, -0.2 + 0.4j, 0.5])
    g0, g1 = seq.gamma(0), seq.gamma(1)
    r0 = rho_of(g0)
    c = build_cmv(seq, 1)
    expect = [[np.conj(g0), r0 * np.conj(g1)], [r0, -g0 * np.conj(g1)]]
    assert np.allclose(c.to_dense()[:2, :2], expect)
    assert c[0, 1] == c.to_dense()[0, 1] and c[0, 4] == 0


def test_interior_unitarity_power_law():
    assert build_cmv(PowerLaw(3.0), 100).interior_unitarity_residual() < 1e-12


@pytest.mark.parametrize("M", [1, 7, 60, 500])
def test_factorization(M, rng):
    for seq in (PowerLaw(2.0), random_seq(rng, 2 * M + 2)):
        L, Mm = cmv_factors(seq, M)
        c = build_cmv(seq, M).to_dense()
        inner = slice(0, 2 * M - 1)
        assert np.abs((L @ Mm)[inner, inner] - c[inner, inner]).max() < 1e-14


def test_boundary_parameter_rejected():
    with pytest.raises(DomainError):
        build_cmv(Explicit([0.1, 1.0]), 2)


@pytest.mark.parametrize("seq", [Zero(), PowerLaw(3.0), Homogeneous(0.4 + 0.2j)])
def test_correspondence_examples(seq):
    assert cmv_walk_correspondence(seq, 100, 50) < 1e-12


def test_correspondence_random(rng):
    for _ in range(10):
        assert cmv_walk_correspondence(random_seq(rng), 100, 50) < 1e-12
