"""Five-diagonal CMV matrices and their link to the reflecting half-line walk."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coins import CoinSequence, Reindexed, rho_of, theta_block
from .errors import DomainError
from .walk import WalkKind, effective_gammas

__all__ = ["CMVMatrix", "build_cmv", "cmv_factors", "walk_unitary", "cmv_walk_correspondence"]

_BAND = 2


@dataclass(frozen=True)
class CMVMatrix:
    """Truncated CMV matrix of size ``2M+1`` in banded storage.

    ``bands[2 + i - k, k]`` holds entry ``(i, k)`` (the scipy ``solve_banded``
    layout with two sub- and two super-diagonals).
    """

    params: np.ndarray
    bands: np.ndarray

    @property
    def size(self) -> int:
        return self.bands.shape[1]

    def __getitem__(self, idx):
        i, k = idx
        if abs(i - k) > _BAND or not (0 <= i < self.size and 0 <= k < self.size):
            return 0j
        return self.bands[_BAND + i - k, k]

    def to_dense(self) -> np.ndarray:
        n = self.size
        out = np.zeros((n, n), dtype=complex)
        for d in range(-_BAND, _BAND + 1):
            row = self.bands[_BAND + d]
            # entries (i, k) with i - k = d
            ks = np.arange(max(0, -d), min(n, n - d))
            out[ks + d, ks] = row[ks]
        return out

    def interior_unitarity_residual(self, margin: int = 2) -> float:
        """Max deviation of ``C C^dagger`` from I on rows away from the edge."""
        c = self.to_dense()
        inner = slice(margin, self.size - margin)
        g = c[inner] @ c[inner].conj().T
        return float(np.max(np.abs(g - np.eye(g.shape[0]))))


def build_cmv(coins: CoinSequence, M: int) -> CMVMatrix:
    """CMV matrix from the parameters ``gamma_0 .. gamma_{2M}``.

    Entries follow the LM product pattern, row by row::

        C[2k,   2k-1] = conj(g_2k) rho_{2k-1}   C[2k,   2k] = -conj(g_2k) g_{2k-1}
        C[2k,   2k+1] = rho_2k conj(g_{2k+1})   C[2k,   2k+2] = rho_2k rho_{2k+1}
        C[2k+1, 2k-1] = rho_2k rho_{2k-1}       C[2k+1, 2k] = -rho_2k g_{2k-1}
        C[2k+1, 2k+1] = -g_2k conj(g_{2k+1})    C[2k+1, 2k+2] = -g_2k rho_{2k+1}

    with the conventions ``g_{-1} = -1``, ``rho_{-1} = 0``.
    """
    if M < 1:
        raise ValueError("M must be at least 1")
    n = 2 * M + 1
    g = np.asarray(coins.gammas(np.arange(n + 1)), dtype=complex)
    if np.any(np.abs(g[:n]) >= 1.0):
        raise DomainError("CMV parameters must satisfy |gamma| < 1")

    def gam(k):
        return -1.0 + 0j if k == -1 else g[k]

    def rho(k):
        return 0.0 if k == -1 else float(rho_of(g[k]))

    bands = np.zeros((2 * _BAND + 1, n), dtype=complex)

    def put(i, k, v):
        if 0 <= i < n and 0 <= k < n:
            bands[_BAND + i - k, k] = v

    for i in range(0, n, 2):
        k = i // 2
        e, o = 2 * k, 2 * k + 1
        put(e, e - 1, np.conj(gam(e)) * rho(e - 1))
        put(e, e, -np.conj(gam(e)) * gam(e - 1))
        put(e, e + 1, rho(e) * np.conj(gam(o)))
        put(e, e + 2, rho(e) * rho(o))
        put(o, e - 1, rho(e) * rho(e - 1))
        put(o, e, -rho(e) * gam(e - 1))
        put(o, o, -gam(e) * np.conj(gam(o)))
        put(o, o + 1, -gam(e) * rho(o))
    return CMVMatrix(g[:n], bands)


def cmv_factors(coins: CoinSequence, M: int) -> tuple[np.ndarray, np.ndarray]:
    """Dense ``L = diag(Theta_0, Theta_2, ...)`` and ``M = diag(1, Theta_1, ...)``.

    Both are cut to size ``2M+1``; the last block of ``L`` keeps its
    top-left entry only.
    """
    n = 2 * M + 1
    g = coins.gammas(np.arange(n))
    L = np.zeros((n + 1, n + 1), dtype=complex)
    Mm = np.zeros((n + 1, n + 1), dtype=complex)
    for k in range(0, n, 2):
        L[k : k + 2, k : k + 2] = theta_block(g[k])
    Mm[0, 0] = 1.0
    for k in range(1, n, 2):
        Mm[k : k + 2, k : k + 2] = theta_block(g[k])
    return L[:n, :n], Mm[:n, :n]


def walk_unitary(coins: CoinSequence, sites: int, kind=WalkKind.H2) -> np.ndarray:
    """One-step evolution of a half-line walk cut to sites ``0..sites-1``.

    Basis index ``2j`` is ``(j, L)`` and ``2j+1`` is ``(j, R)``.  Amplitude
    leaving the window is dropped, so only columns away from the right edge
    are faithful.
    """
    kind = WalkKind.parse(kind)
    g = effective_gammas(coins, kind, np.arange(sites))
    rho = rho_of(g)
    U = np.zeros((2 * sites, 2 * sites), dtype=complex)
    for j in range(sites):
        for chi, (cl, cr) in enumerate([(rho[j], -g[j]), (np.conj(g[j]), rho[j])]):
            col = 2 * j + chi
            # left output -> (j-1, L); right output -> (j+1, R)
            if j >= 1:
                U[2 * (j - 1), col] += cl
            elif kind is WalkKind.H1:
                U[1, col] += cl
            if j + 1 < sites:
                U[2 * (j + 1) + 1, col] += cr
    return U


def cmv_walk_correspondence(coins: CoinSequence, M: int, inner: int | None = None) -> float:
    """Max deviation between the reflecting walk's ``U^2`` and a CMV matrix.

    On the even subspace with ordered basis
    ``(0,L), (2,R), (2,L), (4,R), (4,L), ...`` the two-step evolution of the
    H2 walk equals the CMV matrix built from ``(gamma_1, gamma_2, ...)``;
    on the odd subspace ``(1,R), (1,L), (3,R), (3,L), ...`` it equals the
    transpose.  Only the leading ``inner`` rows and columns are compared
    (default ``M``).
    """
    if inner is None:
        inner = M
    n = 2 * M + 1
    sites = n + 4
    U = walk_unitary(coins, sites, WalkKind.H2)
    U2 = U @ U
    even = [0]
    odd = []
    for k in range(1, M + 1):
        even += [2 * (2 * k) + 1, 2 * (2 * k)]
    for k in range(M + 1):
        odd += [2 * (2 * k + 1) + 1, 2 * (2 * k + 1)]
    even, odd = np.array(even[:n]), np.array(odd[:n])
    C = build_cmv(Reindexed(coins, start=1), M).to_dense()
    w = slice(0, inner)
    r_even = np.max(np.abs(U2[np.ix_(even, even)][w, w] - C[w, w]))
    r_odd = np.max(np.abs(U2[np.ix_(odd, odd)][w, w] - C.T[w, w]))
    return float(max(r_even, r_odd))

