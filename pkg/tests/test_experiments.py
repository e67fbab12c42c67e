import numpy as np
import pytest

from qwalk import (Homogeneous, PowerLaw, PowerLawModel, compare_profiles, decay_fit, evolve, ld_precision,
                   log_tail_probability, weak_limit_tv)


def test_compare_bottom_rows():
    cmp = compare_profiles(PowerLaw(3.0), (1, 0), 1000, 5)
    bottom = {r.j: r for r in cmp.rows if r.region == "bottom"}
    assert bottom[0].residual < 1e-3 and bottom[1].residual < 1e-3


def test_compare_orthogonal_state_origin_vanishes():
    phi = np.array([np.sqrt(2), -1]) / np.sqrt(3)
    cmp = compare_profiles(PowerLaw(3.0), tuple(phi), 1000, 10)
    assert all(r.simulated < 1e-20 and r.predicted < 1e-20 for r in cmp.rows if r.region == "origin")


def test_compare_partial_sums():
    cmp = compare_profiles(PowerLaw(3.0), (1, 0), 2000, 40)
    assert 0.98 <= cmp.c0_partial + cmp.c1_partial <= 1.0
    assert cmp.max_residual < 1e-3


def test_compare_homogeneous():
    cmp = compare_profiles(Homogeneous(0.5), (1, 0), 1000, 8, "h1")
    assert cmp.max_residual < 1e-4


def test_compare_rejects_unsupported():
    with pytest.raises(ValueError):
        compare_profiles(PowerLaw(3.0), (1, 0), 10, 2, "d")


def test_log_tail_and_precision():
    model = PowerLawModel(3.0)
    bits = ld_precision(200, model.tau)
    assert bits > 64 + 200 * 0.58
    s = evolve(model.orthogonal_state_hp(bits), 200, "h1", model.coins, precision=bits)
    assert log_tail_probability(s, 0.0) == pytest.approx(np.log(1.0), abs=0.8)
    assert log_tail_probability(s, 1.0) == -np.inf
    # the front-relative tail sits far below the double range
    assert log_tail_probability(s, 0.6) < -90


def test_weak_limit_small_n():
    assert weak_limit_tv(0.5, (1, 0), "d", 400) < 0.1


def test_decay_fit_h2():
    base, nu2 = decay_fit(0.5, (1, 0), "h2", 2000, range(2, 13))
    assert abs(base / nu2 - 1) < 0.02
