"""Schur functions, Caratheodory functions and spectral measures on the circle.

A parameter sequence ``(gamma_0, gamma_1, ...)`` determines a Schur
function through the continued-fraction step

    f_k(z) = (gamma_k + z f_{k+1}(z)) / (1 + conj(gamma_k) z f_{k+1}(z)),

and the probability measure ``mu`` on the unit circle with Caratheodory
function ``F(z) = (1 + z f_0)/(1 - z f_0) = int (e^{it} + z)/(e^{it} - z) dmu``.
The absolutely continuous weight is the radial limit of ``Re F`` and a point
mass at angle ``t`` is the radial limit of ``(1 - s) F(s e^{it}) / 2``.
Both limits are taken on the ladder ``s_k = 1 - 2^-k`` with Richardson
extrapolation in ``1 - s``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .coins import CoinSequence, Reindexed
from .errors import NumericalLimitError, SingularPointError
from .genfun import g_minus, g_plus

__all__ = [
    "SchurFunction",
    "schur_eval",
    "caratheodory",
    "ac_weight",
    "mass_at",
    "SpectralMeasure",
    "recover_measure",
    "bridge_check",
    "LADDER",
]

LADDER = np.arange(10, 21)
_MAX_DEPTH = 2**16


def _schur_run(params: CoinSequence, j: int, z, depth: int, seed):
    f = seed
    for k in range(j + depth - 1, j - 1, -1):
        g = complex(params.gamma(k))
        zf = z * f
        f = (g + zf) / (1 + g.conjugate() * zf)
    return f


@dataclass(frozen=True)
class SchurFunction:
    """Evaluator for the Schur functions ``f_j`` of a parameter sequence.

    Parameters
    ----------
    params : CoinSequence
        Read from index 0 upward.
    depth : int, optional
        Number of Schur steps.  Defaults to 8 with an exact tail and to
        adaptive doubling otherwise.
    tail : {"auto", "zero"} or callable
        Seed at depth.  ``"auto"`` uses the sequence's closed-form tail when
        it has one and zero otherwise; a callable is called as ``tail(k, z)``.
    """

    params: CoinSequence
    depth: int | None = None
    tail: object = "auto"
    tol: float = 1e-15

    def _seed(self, k, z):
        if callable(self.tail):
            return self.tail(k, z)
        if self.tail == "auto":
            t = self.params.schur_tail(k, z)
            if t is not None:
                return t
        return 0 * np.asarray(z)

    def _has_exact_tail(self, k, z) -> bool:
        return callable(self.tail) or (self.tail == "auto" and self.params.schur_tail(k, z) is not None)

    def __call__(self, z, j: int = 0):
        z = np.asarray(z, dtype=complex) if np.ndim(z) else complex(z)
        if self.depth is not None:
            return _schur_run(self.params, j, z, self.depth, self._seed(j + self.depth, z))
        if self._has_exact_tail(j + 8, z):
            return _schur_run(self.params, j, z, 8, self._seed(j + 8, z))
        d = 32
        prev = _schur_run(self.params, j, z, d, self._seed(j + d, z))
        while d < _MAX_DEPTH:
            d *= 2
            cur = _schur_run(self.params, j, z, d, self._seed(j + d, z))
            if np.all(np.abs(cur - prev) < self.tol * 10):
                return cur
            prev = cur
        raise NumericalLimitError("Schur continued fraction did not converge")


def schur_eval(params: CoinSequence, j: int, z, depth: int | None = None, tail="auto"):
    """``f_j(z)`` for the parameter sequence ``params``."""
    return SchurFunction(params, depth, tail)(z, j)


def caratheodory(schur: SchurFunction, z):
    """``F(z) = (1 + z f(z)) / (1 - z f(z))``."""
    zf = z * schur(z)
    return (1 + zf) / (1 - zf)


def _poisson_masses(masses, z):
    out = 0.0
    for theta, m in masses:
        e = np.exp(1j * theta)
        out = out + m * (e + z) / (e - z)
    return out


def _richardson(values: np.ndarray):
    """Extrapolate samples at h, h/2, h/4, ... (last axis) to h = 0.

    Returns the final estimate and the previous-order estimate.
    """
    table = [values]
    for order in range(1, 4):
        prev = table[-1]
        fac = 2.0**order
        table.append((fac * prev[..., 1:] - prev[..., :-1]) / (fac - 1.0))
    return table[-1][..., -1], table[-2][..., -1]


def _ladder_points(theta):
    theta = np.asarray(theta, dtype=float)
    h = 2.0 ** (-LADDER.astype(float))
    s = 1.0 - h
    z = s * np.exp(1j * theta[..., None])
    return z, h


def ac_weight(schur: SchurFunction, theta, masses: Sequence[tuple[float, float]] = (), on_singular: str = "raise"):
    """Absolutely continuous weight ``w(theta)`` (density w.r.t. dtheta/2pi).

    Known point masses ``(angle, mass)`` are removed through their Poisson
    kernels before the radial limit is taken, so the weight can be sampled
    close to them.  If the boundary values still grow along the ladder a
    :class:`SingularPointError` is raised (``on_singular="raise"``) or NaN
    is returned (``"nan"``).
    """
    scalar = np.ndim(theta) == 0
    z, h = _ladder_points(theta)
    F = caratheodory(schur, z) - _poisson_masses(masses, z)
    v = F.real
    growth = np.abs(v[..., -1]) / np.maximum(np.abs(v[..., -6]), 1e-300)
    singular = (growth > 8.0) & (np.abs(v[..., -1]) > 1e3)
    est, _ = _richardson(v)
    if np.any(singular):
        if on_singular == "raise":
            raise SingularPointError("boundary value diverges: point mass at this angle")
        est = np.where(singular, np.nan, est)
    return float(est) if scalar else est


def mass_at(schur: SchurFunction, theta: float, tol: float = 1e-7) -> float:
    """Point mass at ``theta`` from ``lim (1 - s) F(s e^{i theta}) / 2``.

    Returns 0.0 when the limit vanishes (below 1e-10).
    """
    z, h = _ladder_points(theta)
    v = 0.5 * h * caratheodory(schur, z)
    est, prev = _richardson(v)
    if not np.isfinite(est) or abs(est - prev) > tol * max(1.0, abs(est)):
        raise NumericalLimitError(f"radial limit at theta={theta} did not settle")
    m = float(est.real)
    return 0.0 if abs(m) < 1e-10 else m


@dataclass
class SpectralMeasure:
    """Weight samples on a grid plus point masses.

    ``weight_fn``, when present, evaluates the weight at arbitrary angles and
    is used for adaptive quadrature in :meth:`total_mass`.
    """

    theta: np.ndarray
    weight: np.ndarray
    masses: list = field(default_factory=list)
    weight_fn: Callable | None = None

    def ac_mass(self) -> float:
        if self.weight_fn is None:
            # midpoint rule on a periodic grid
            return float(np.mean(self.weight))
        breaks = sorted({float(t) % (2 * np.pi) for t, _ in self.masses} - {0.0})
        val, _ = integrate.quad(lambda t: float(self.weight_fn(t)), 0.0, 2 * np.pi,
                                points=breaks or None, limit=200, epsabs=1e-11, epsrel=1e-11)
        return val / (2 * np.pi)

    def total_mass(self) -> float:
        return self.ac_mass() + sum(m for _, m in self.masses)


def midpoint_grid(n: int = 256) -> np.ndarray:
    return 2 * np.pi * (np.arange(n) + 0.5) / n


def recover_measure(schur: SchurFunction, n_grid: int = 256, candidates: Sequence[float] = (0.0,)) -> SpectralMeasure:
    """Masses at the candidate angles and the weight on a midpoint grid."""
    masses = []
    for t in candidates:
        m = mass_at(schur, t)
        if m > 0:
            masses.append((float(t), m))
    theta = midpoint_grid(n_grid)
    w = ac_weight(schur, theta, masses, on_singular="nan")

    def weight_fn(t):
        return ac_weight(schur, t, masses)

    return SpectralMeasure(theta, w, masses, weight_fn)


def bridge_check(coins: CoinSequence, j: int, z, depth: int = 200) -> float:
    """Residual between g-functions and Schur functions of related sequences.

    For ``j >= 0``: ``|g+_j(z) - z^2 f_j(z^2)|`` with parameters
    ``(conj gamma_1, conj gamma_2, ...)``.  For ``j <= 0``:
    ``|g-_j(z) - z^2 f_|j|(z^2)|`` with parameters ``(-gamma_-1, -gamma_-2, ...)``.
    Both sides use zero tails at the same depth.  At ``j = 0`` the larger of
    the two residuals is returned.
    """
    z = complex(z)
    res = 0.0
    if j >= 0:
        g = g_plus(coins, j, z, depth=depth)
        f = schur_eval(Reindexed(coins, start=1, conj=True), j, z * z, depth=depth, tail="zero")
        res = max(res, abs(g - z * z * f))
    if j <= 0:
        g = g_minus(coins, j, z, depth=depth)
        f = schur_eval(Reindexed(coins, start=-1, step=-1, negate=True), -j, z * z, depth=depth, tail="zero")
        res = max(res, abs(g - z * z * f))
    return float(res)
