"""State-vector dynamics for the half-line and full-line walks.

Three variants share the coin-then-shift step:

* ``H1`` -- half line with a self-loop at the origin: the left-moving
  output of site 0 is fed back into ``(0, R)``.
* ``H2`` -- half line whose origin coin is the reflector
  ``[[0, -1], [1, 0]]`` (parameter ``-1``).  Started from ``(1, 0)`` the
  dynamics never leaves the half line; the left output of site 0 is
  dropped (it is identically zero on that invariant subspace).
* ``D`` -- the full line.

After the coin, the ``L`` component moves to ``j - 1`` and the ``R``
component to ``j + 1``.

Double precision is the default.  Passing ``precision=bits`` to
:func:`evolve` switches to gmpy2 multiprecision arithmetic, which is what
the large-deviation estimates need: the tail probabilities they sum are far
below the double-precision noise floor.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator

import gmpy2
import numpy as np

from .coins import CoinSequence, rho_of
from .errors import PreconditionError

__all__ = [
    "WalkKind",
    "WalkState",
    "Distribution",
    "effective_gammas",
    "initial_state",
    "step",
    "evolve",
    "iter_evolve",
    "distribution",
    "dual_distribution",
    "log_distribution",
    "passage_weights",
    "iter_passage_weights",
]

_NORM_TOL = 1e-12


class WalkKind(enum.Enum):
    H1 = "h1"
    H2 = "h2"
    D = "d"

    @classmethod
    def parse(cls, value) -> "WalkKind":
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())

    @property
    def half_line(self) -> bool:
        return self is not WalkKind.D


def effective_gammas(coins: CoinSequence, kind: WalkKind, sites) -> np.ndarray:
    """Parameters actually used by ``kind`` (H2 overrides site 0 with -1)."""
    sites = np.asarray(sites, dtype=np.int64)
    g = coins.gammas(sites).astype(complex)
    if WalkKind.parse(kind) is WalkKind.H2:
        g = np.where(sites == 0, -1.0 + 0j, g)
    return g


@dataclass(frozen=True)
class WalkState:
    """Amplitudes on the contiguous site range ``lo .. lo + len(left) - 1``.

    ``precision`` is ``None`` for complex128 storage, otherwise the gmpy2
    precision (bits) of the object arrays.
    """

    kind: WalkKind
    time: int
    lo: int
    left: np.ndarray
    right: np.ndarray
    precision: int | None = None

    @property
    def hi(self) -> int:
        return self.lo + len(self.left) - 1

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1)

    def amplitude(self, j: int):
        """``(a_L, a_R)`` at site ``j`` (zeros outside the stored range)."""
        i = j - self.lo
        if 0 <= i < len(self.left):
            return self.left[i], self.right[i]
        return 0j, 0j

    def amplitudes(self) -> np.ndarray:
        """Complex array of shape ``(sites, 2)``; multiprecision is rounded."""
        if self.precision is None:
            return np.stack([self.left, self.right], axis=1)
        out = np.empty((len(self.left), 2), dtype=complex)
        out[:, 0] = [complex(x) for x in self.left]
        out[:, 1] = [complex(x) for x in self.right]
        return out

    def norm_sq(self) -> float:
        if self.precision is None:
            return float(np.sum(np.abs(self.left) ** 2 + np.abs(self.right) ** 2))
        with gmpy2.context(precision=self.precision):
            return float(sum(_abs2(a) + _abs2(b) for a, b in zip(self.left, self.right)))


def _abs2(x):
    if isinstance(x, gmpy2.mpc):
        return gmpy2.norm(x)
    return x * x


@dataclass(frozen=True)
class Distribution:
    """Site probabilities at time ``n``; ``dual`` marks the front-relative view."""

    n: int
    sites: np.ndarray
    values: np.ndarray
    dual: bool = False

    def __getitem__(self, j: int) -> float:
        hit = np.nonzero(self.sites == j)[0]
        return float(self.values[hit[0]]) if hit.size else 0.0

    def total(self) -> float:
        return float(np.sum(self.values))

    def as_dict(self) -> dict:
        return {int(j): float(v) for j, v in zip(self.sites, self.values)}


def initial_state(alpha: complex, beta: complex, kind=WalkKind.H1, precision: int | None = None) -> WalkState:
    """Walker at the origin with coin state ``(alpha, beta)``."""
    kind = WalkKind.parse(kind)
    exact = (alpha, beta)
    alpha, beta = complex(alpha), complex(beta)
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1.0) > _NORM_TOL:
        raise PreconditionError("initial coin state must be normalised")
    if kind is WalkKind.H2 and abs(beta) > _NORM_TOL:
        raise PreconditionError("H2 walks start from the coin state (1, 0)")
    if precision is None:
        return WalkState(kind, 0, 0, np.array([alpha]), np.array([beta]))
    with gmpy2.context(precision=precision):
        # gmpy2 inputs are kept as given so states can be specified beyond double precision
        a = np.array([_hp(x) for x in exact[:1]], dtype=object)
        b = np.array([_hp(x) for x in exact[1:]], dtype=object)
    return WalkState(kind, 0, 0, a, b, precision)


def _hp(x):
    if isinstance(x, (gmpy2.mpfr, gmpy2.mpc)):
        return +x
    x = complex(x)
    return gmpy2.mpfr(x.real) if x.imag == 0 else gmpy2.mpc(x)


def _coefficients(coins, kind, lo, hi, precision):
    """(rho, gamma, conj gamma) arrays over sites lo..hi."""
    sites = np.arange(lo, hi + 1)
    if precision is None:
        g = effective_gammas(coins, kind, sites)
        return rho_of(g).astype(complex), g, np.conj(g)
    rho = np.empty(len(sites), dtype=object)
    g = np.empty(len(sites), dtype=object)
    gb = np.empty(len(sites), dtype=object)
    h2 = kind is WalkKind.H2
    for i, j in enumerate(sites):
        gj = gmpy2.mpfr(-1) if (h2 and j == 0) else coins.gamma_hp(int(j))
        if isinstance(gj, gmpy2.mpc):
            n2 = gmpy2.norm(gj)
            gb[i] = gmpy2.mpc(gj.real, -gj.imag)
        else:
            n2 = gj * gj
            gb[i] = gj
        g[i] = gj
        rho[i] = gmpy2.sqrt(max(1 - n2, gmpy2.mpfr(0)))
    return rho, g, gb


def _advance(kind, lo, aL, aR, rho, g, gb):
    """One coin+shift on aligned arrays; returns (new_lo, newL, newR)."""
    outL = rho * aL + gb * aR
    outR = -g * aL + rho * aR
    m = len(aL)
    dtype = aL.dtype
    zero = 0j if dtype != object else 0
    if kind is WalkKind.D:
        newL = np.full(m + 2, zero, dtype=dtype)
        newR = np.full(m + 2, zero, dtype=dtype)
        newL[:m] = outL
        newR[2:] = outR
        return lo - 1, newL, newR
    # half line: stored range starts at 0
    newL = np.full(m + 1, zero, dtype=dtype)
    newR = np.full(m + 1, zero, dtype=dtype)
    newL[: m - 1] = outL[1:]
    newR[1:] = outR
    if kind is WalkKind.H1:
        newR[0] = newR[0] + outL[0]
    return 0, newL, newR


def step(state: WalkState, coins: CoinSequence) -> WalkState:
    """Apply one coin operation followed by the shift of ``state.kind``."""
    kind = state.kind
    if state.precision is None:
        rho, g, gb = _coefficients(coins, kind, state.lo, state.hi, None)
        lo, L, R = _advance(kind, state.lo, state.left, state.right, rho, g, gb)
    else:
        with gmpy2.context(precision=state.precision):
            rho, g, gb = _coefficients(coins, kind, state.lo, state.hi, state.precision)
            lo, L, R = _advance(kind, state.lo, state.left, state.right, rho, g, gb)
    return WalkState(kind, state.time + 1, lo, L, R, state.precision)


def iter_evolve(phi, n: int, kind, coins: CoinSequence, precision: int | None = None) -> Iterator[WalkState]:
    """Yield the states at times ``0, 1, ..., n``."""
    kind = WalkKind.parse(kind)
    state = initial_state(phi[0], phi[1], kind, precision)
    yield state
    if n <= 0:
        return
    lo_all = -n if kind is WalkKind.D else 0
    ctx = gmpy2.context(precision=precision) if precision else None
    if ctx is not None:
        ctx.__enter__()
    try:
        rho, g, gb = _coefficients(coins, kind, lo_all, n, precision)
        lo, L, R = state.lo, state.left, state.right
        for t in range(1, n + 1):
            a = lo - lo_all
            b = a + len(L)
            lo, L, R = _advance(kind, lo, L, R, rho[a:b], g[a:b], gb[a:b])
            yield WalkState(kind, t, lo, L, R, precision)
    finally:
        if ctx is not None:
            ctx.__exit__(None, None, None)


def evolve(phi, n: int, kind, coins: CoinSequence, precision: int | None = None) -> WalkState:
    """Run ``n`` steps from the coin state ``phi = (alpha, beta)`` at the origin.

    Parameters
    ----------
    phi : pair of complex
        Initial coin state, normalised to 1e-12.
    n : int
        Number of steps.
    kind : WalkKind or str
        ``"h1"``, ``"h2"`` or ``"d"``.  ``H2`` requires ``beta = 0``.
    coins : CoinSequence
    precision : int, optional
        gmpy2 precision in bits; ``None`` uses complex128.

    Returns
    -------
    WalkState
    """
    state = None
    for state in iter_evolve(phi, n, kind, coins, precision):
        pass
    return state


def distribution(state: WalkState) -> Distribution:
    """``mu_n(j) = |a_L(j)|^2 + |a_R(j)|^2`` over the stored range."""
    if state.precision is None:
        vals = np.abs(state.left) ** 2 + np.abs(state.right) ** 2
    else:
        with gmpy2.context(precision=state.precision):
            vals = np.array([float(_abs2(a) + _abs2(b)) for a, b in zip(state.left, state.right)])
    return Distribution(state.time, state.sites, vals)


def dual_distribution(state: WalkState) -> Distribution:
    """Distribution seen from the front: ``mu~_n(j) = mu_n(n - j)``."""
    d = distribution(state)
    return Distribution(d.n, (d.n - d.sites)[::-1], d.values[::-1], dual=True)


def log_distribution(state: WalkState) -> tuple[np.ndarray, np.ndarray]:
    """Sites and natural logs of ``mu_n``; exact zeros map to ``-inf``.

    For multiprecision states the logarithm is taken before rounding, so
    probabilities far below the double range keep their exponent.
    """
    if state.precision is None:
        with np.errstate(divide="ignore"):
            return state.sites, np.log(np.abs(state.left) ** 2 + np.abs(state.right) ** 2)
    with gmpy2.context(precision=state.precision):
        logs = np.array([float(gmpy2.log(_abs2(a) + _abs2(b))) for a, b in zip(state.left, state.right)])
    return state.sites, logs


def _local_stack(g):
    """P, Q, S matrices for an array of parameters, shape (m, 2, 2)."""
    rho = rho_of(g)
    m = len(g)
    P = np.zeros((m, 2, 2), dtype=complex)
    Q = np.zeros((m, 2, 2), dtype=complex)
    S = np.zeros((m, 2, 2), dtype=complex)
    P[:, 0, 0], P[:, 0, 1] = rho, np.conj(g)
    Q[:, 1, 0], Q[:, 1, 1] = -g, rho
    S[:, 1, 0], S[:, 1, 1] = rho, np.conj(g)
    return P, Q, S


def iter_passage_weights(n_max: int, kind, coins: CoinSequence):
    """Yield ``(n, lo, Xi)`` with ``Xi[i] = Xi_n(lo + i)`` for ``n = 0..n_max``.

    Uses the path-weight recursion
    ``Xi_n(j) = P_{j+1} Xi_{n-1}(j+1) + Q_{j-1} Xi_{n-1}(j-1)``,
    with ``S_0 Xi_{n-1}(0)`` replacing the missing term at ``j = 0`` for H1.
    """
    kind = WalkKind.parse(kind)
    lo_all = -n_max - 1 if kind is WalkKind.D else -1
    g = effective_gammas(coins, kind, np.arange(lo_all, n_max + 2))
    P, Q, S = _local_stack(g)
    xi = np.eye(2, dtype=complex)[None]
    lo = 0
    yield 0, lo, xi
    for n in range(1, n_max + 1):
        m = len(xi)
        new = np.zeros((m + 2, 2, 2), dtype=complex)
        a = lo - lo_all  # index of site lo in the coefficient arrays
        # new site lo-1+k receives P_{site+1} Xi(site+1) and Q_{site-1} Xi(site-1)
        new[:m] += np.einsum("kab,kbc->kac", P[a : a + m], xi)
        new[2:] += np.einsum("kab,kbc->kac", Q[a : a + m], xi)
        lo -= 1
        if kind is not WalkKind.D:
            new = new[1:]  # drop site -1
            lo = 0
            if kind is WalkKind.H1:
                new[0] += S[-lo_all] @ xi[0]
        xi = new
        yield n, lo, xi


def passage_weights(n: int, kind, coins: CoinSequence) -> dict[int, np.ndarray]:
    """Map ``j -> Xi_n(j)`` (2x2 complex) over the reachable sites."""
    if n < 0:
        raise PreconditionError("n must be non-negative")
    for t, lo, xi in iter_passage_weights(n, kind, coins):
        if t == n:
            return {lo + i: xi[i].copy() for i in range(len(xi))}
    raise AssertionError("unreachable")
