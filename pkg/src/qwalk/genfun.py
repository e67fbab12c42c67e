"""Generating functions of passage weights via continued fractions.

The g-functions are the first-return generating functions of the walk
restricted to the right (``plus``) or left (``minus``) of a site.  They obey
backward recursions

    g+_j = z^2 (conj(c) + g+_{j+1}) / (1 + c g+_{j+1}),        c = gamma_{j+1}
    g-_j = z^2 (g-_{j-1} - c) / (1 - conj(c) g-_{j-1}),        c = gamma_{j-1}

which are run from a seed at depth ``J`` (zero unless a closed-form tail is
supplied).  The full generating function ``Xi~_j(z) = sum_n Xi_n(j) z^n``
is assembled from them in closed form.

Every formula here is written once against a small arithmetic interface, so
the same code evaluates at a complex point or in truncated
:class:`~qwalk.series.PowerSeries` arithmetic.  The latter yields the
passage weights ``Xi_n(j)`` as series coefficients, independently of the
time-stepping code in :mod:`qwalk.walk`.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .coins import CoinSequence, Doubled, Reindexed, rho_of
from .errors import NumericalLimitError, SingularEvaluationError
from .series import MatrixSeries, PowerSeries
from .walk import WalkKind

__all__ = [
    "GFunction",
    "g_plus",
    "g_minus",
    "lambda_plus",
    "lambda_minus",
    "first_return_gf",
    "xi_tilde_0",
    "xi_tilde_j",
    "series_coefficients",
    "doubling_check",
    "default_depth",
]

_SING_TOL = 1e-14
_MAX_DEPTH = 2**16


def default_depth() -> int | None:
    """Fixed depth from ``QWALK_DEPTH`` if set, else ``None`` (adaptive)."""
    raw = os.environ.get("QWALK_DEPTH")
    return int(raw) if raw else None


def _div(a, b):
    if isinstance(b, PowerSeries):
        return a / b
    if np.any(np.abs(b) < _SING_TOL):
        raise SingularEvaluationError("vanishing denominator in generating function")
    return a / b


def _seed(tail, side, coins, k, z):
    if tail is None or isinstance(z, PowerSeries):
        return 0 * z
    if callable(tail):
        return tail(k, z)
    if tail == "exact":
        f = _exact_tail(coins, side, k, z)
        if f is not None:
            return f
        return 0 * z
    raise ValueError(f"unknown tail seed {tail!r}")


def _exact_tail(coins, side, k, z):
    # g+_k(z) = z^2 f_k(z^2) for the Schur parameters (conj g_1, conj g_2, ...)
    # g-_k(z) = z^2 f_|k|(z^2) for (-g_{-1}, -g_{-2}, ...)
    z2 = z * z
    if side == "plus":
        seq = Reindexed(coins, start=1, conj=True)
        f = seq.schur_tail(k, z2)
    else:
        seq = Reindexed(coins.mirrored(), start=1, negate=True)
        f = seq.schur_tail(-k, z2)
    return None if f is None else z2 * f


def _run_plus(coins, j, z, depth, seed):
    z2 = z * z
    g = seed
    for k in range(j + depth - 1, j - 1, -1):
        c = complex(coins.gamma(k + 1))
        if c == 0:
            g = z2 * g
        else:
            g = z2 * _div(c.conjugate() + g, 1 + c * g)
    return g


def _run_minus(coins, j, z, depth, seed):
    z2 = z * z
    g = seed
    for k in range(j - depth + 1, j + 1):
        c = complex(coins.gamma(k - 1))
        if c == 0:
            g = z2 * g
        else:
            g = z2 * _div(g - c, 1 - c.conjugate() * g)
    return g


def _evaluate(side, coins, j, z, depth, tail, tol):
    run = _run_plus if side == "plus" else _run_minus
    sign = 1 if side == "plus" else -1
    if isinstance(z, PowerSeries):
        # each level carries a factor z^2: depth N/2 + 2 is exact to degree N
        d = z.degree // 2 + 2
        return run(coins, j, z, d, 0 * z)
    if depth is None:
        depth = default_depth()
    if depth is not None:
        return run(coins, j, z, depth, _seed(tail, side, coins, j + sign * depth, z))
    if tail == "exact" and _exact_tail(coins, side, j + sign, z) is not None:
        return run(coins, j, z, 1, _seed(tail, side, coins, j + sign, z))
    d = 16
    prev = run(coins, j, z, d, _seed(tail, side, coins, j + sign * d, z))
    while d < _MAX_DEPTH:
        d *= 2
        cur = run(coins, j, z, d, _seed(tail, side, coins, j + sign * d, z))
        if np.all(np.abs(cur - prev) < tol):
            return cur
        prev = cur
    raise NumericalLimitError("continued fraction did not converge within depth 2**16")


def g_plus(coins: CoinSequence, j: int, z, depth: int | None = None, tail=None, tol: float = 1e-14):
    """Right-side g-function ``g+_j(z)``.

    Parameters
    ----------
    coins : CoinSequence
    j : int
        Site; the recursion reads ``gamma_{j+1}, gamma_{j+2}, ...``.
    z : complex, ndarray or PowerSeries
        Evaluation point(s) in the open unit disk, or the series variable.
    depth : int, optional
        Truncation depth ``J``.  ``None`` doubles ``J`` from 16 until two
        successive values agree to ``tol`` (or uses ``QWALK_DEPTH``).
    tail : None, "exact" or callable
        Seed at depth ``J``: zero, the sequence's closed-form tail, or
        ``tail(k, z)``.
    """
    return _evaluate("plus", coins, j, z, depth, tail, tol)


def g_minus(coins: CoinSequence, j: int, z, depth: int | None = None, tail=None, tol: float = 1e-14):
    """Left-side g-function ``g-_j(z)``; reads ``gamma_{j-1}, gamma_{j-2}, ...``."""
    return _evaluate("minus", coins, j, z, depth, tail, tol)


@dataclass(frozen=True)
class GFunction:
    """Bound evaluator for one side of one coin sequence."""

    coins: CoinSequence
    side: str = "plus"
    depth: int | None = None
    tail: object = None
    tol: float = 1e-14

    def __call__(self, j: int, z):
        return _evaluate(self.side, self.coins, j, z, self.depth, self.tail, self.tol)


def _site_gamma(coins, kind, j) -> complex:
    if kind is WalkKind.H2 and j == 0:
        return -1 + 0j
    return complex(coins.gamma(j))


def lambda_plus(coins, k, z, gp=None, **kw):
    """``lambda+_k(z) = z rho_k / (1 + gamma_k g+_k(z))``."""
    c = complex(coins.gamma(k))
    if gp is None:
        gp = g_plus(coins, k, z, **kw)
    return _div(z * float(rho_of(c)), 1 + c * gp)


def lambda_minus(coins, k, z, gm=None, **kw):
    """``lambda-_k(z) = z rho_k / (1 - conj(gamma_k) g-_k(z))``."""
    c = complex(coins.gamma(k))
    if gm is None:
        gm = g_minus(coins, k, z, **kw)
    return _div(z * float(rho_of(c)), 1 - c.conjugate() * gm)


def _finish(entries):
    flat = [e for row in entries for e in row]
    series = [e for e in flat if isinstance(e, PowerSeries)]
    if series:
        deg = series[0].degree
        fixed = [[e if isinstance(e, PowerSeries) else PowerSeries.constant(e, deg) for e in row] for row in entries]
        return MatrixSeries.from_entries(fixed)
    arr = np.empty((2, 2) + np.broadcast(*flat).shape, dtype=complex)
    for a in range(2):
        for b in range(2):
            arr[a, b] = entries[a][b]
    return arr


def first_return_gf(coins: CoinSequence, j: int, z, kind=WalkKind.D, side: str = "plus", **kw):
    """First-return generating matrix ``F~+_j`` or ``F~-_j``.

    ``F~+_j = g+_j R_j`` (plus ``z S_0`` for H1 at ``j = 0``) and
    ``F~-_j = g-_j S_j``.
    """
    kind = WalkKind.parse(kind)
    c = _site_gamma(coins, kind, j)
    rho = float(rho_of(c))
    zero = 0 * z
    if side == "plus":
        g = g_plus(coins, j, z, **kw)
        m = [[-c * g, rho * g], [zero, zero]]
        if kind is WalkKind.H1 and j == 0:
            m[1] = [rho * z, c.conjugate() * z]
    elif side == "minus":
        g = g_minus(coins, j, z, **kw)
        m = [[zero, zero], [rho * g, c.conjugate() * g]]
    else:
        raise ValueError("side must be 'plus' or 'minus'")
    return _finish(m)


def _xi0_entries(coins, kind, z, kw):
    c0 = _site_gamma(coins, kind, 0)
    r0 = float(rho_of(c0))
    if kind is WalkKind.H2:
        gp = g_plus(coins, 0, z, **kw)
        return [[_div(1, 1 - gp), 0 * z], [0 * z, 1 + 0 * z]]
    if kind is WalkKind.H1:
        gp = g_plus(coins, 0, z, **kw)
        den = 1 - c0.conjugate() * z + (c0 - z) * gp
        m = [[1 - c0.conjugate() * z, r0 * gp], [r0 * z, 1 + c0 * gp]]
    else:
        gp = g_plus(coins, 0, z, **kw)
        gm = g_minus(coins, 0, z, **kw)
        den = 1 + c0 * gp - c0.conjugate() * gm - gp * gm
        m = [[1 - c0.conjugate() * gm, r0 * gp], [r0 * gm, 1 + c0 * gp]]
    return [[_div(e, den) for e in row] for row in m]


def xi_tilde_0(coins: CoinSequence, z, kind=WalkKind.D, **kw):
    """Generating function ``Xi~_0(z)`` of the return weights to the origin.

    ``z`` may be a complex number, an array, or a :class:`PowerSeries`
    variable (in which case a :class:`MatrixSeries` is returned).
    """
    return _finish(_xi0_entries(coins, WalkKind.parse(kind), z, kw))


def xi_tilde_j(coins: CoinSequence, z, j: int, kind=WalkKind.D, **kw):
    """Generating function ``Xi~_j(z)`` for ``j != 0`` (``j = 0`` delegates)."""
    kind = WalkKind.parse(kind)
    if j == 0:
        return xi_tilde_0(coins, z, kind, **kw)
    if j < 0 and kind.half_line:
        zero = 0 * z
        return _finish([[zero, zero], [zero, zero]])
    x0 = _xi0_entries(coins, kind, z, kw)
    c0 = _site_gamma(coins, kind, 0)
    r0 = float(rho_of(c0))
    if j > 0:
        row = (-c0, r0)
        prod = 1 + 0 * z
        for k in range(1, j):
            prod = prod * lambda_plus(coins, k, z, **kw)
        gj = g_plus(coins, j, z, **kw)
        col = (lambda_plus(coins, j, z, gp=gj) * gj, z)
    else:
        row = (r0, c0.conjugate())
        prod = 1 + 0 * z
        for k in range(-1, j, -1):
            prod = prod * lambda_minus(coins, k, z, **kw)
        gj = g_minus(coins, j, z, **kw)
        col = (z, lambda_minus(coins, j, z, gm=gj) * gj)
    # row vector times Xi~_0
    v = [row[0] * x0[0][b] + row[1] * x0[1][b] for b in range(2)]
    return _finish([[prod * col[a] * v[b] for b in range(2)] for a in range(2)])


def series_coefficients(j: int, kind, coins: CoinSequence, N: int) -> MatrixSeries:
    """``Xi~_j`` as a truncated series: coefficient ``n`` is ``Xi_n(j)``."""
    z = PowerSeries.variable(N)
    return xi_tilde_j(coins, z, j, kind)


def doubling_check(coins: CoinSequence, j: int, z, **kw) -> float:
    """Residual of ``Xi~_{j,H1}(z^2) = Xi~_{2j,D}(z)``.

    The full-line walk uses :class:`~qwalk.coins.Doubled` parameters
    (the half-line ones on even sites, 0 on odd sites, -1 at site -1).
    """
    lhs = xi_tilde_j(coins, z * z, j, WalkKind.H1, **kw)
    rhs = xi_tilde_j(Doubled(coins), z, 2 * j, WalkKind.D, **kw)
    return float(np.max(np.abs(lhs - rhs)))
