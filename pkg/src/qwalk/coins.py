"""Coin parameter sequences and the local 2x2 matrices built from them.

A coin sequence maps a site ``j`` to a complex parameter ``gamma_j`` with
``|gamma_j| <= 1``.  The coin at site ``j`` acts on the chirality pair
``(L, R)`` as

    H(gamma) = [[rho, conj(gamma)], [-gamma, rho]],   rho = sqrt(1 - |gamma|^2).

The same sequence, read from index 0 upward, doubles as a list of Schur
(Verblunsky) parameters.  Sequences that know their Schur functions in
closed form expose them through :meth:`CoinSequence.schur_tail`, which
lets continued-fraction evaluators start from an exact seed.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import gmpy2
import numpy as np

from .errors import DomainError

__all__ = [
    "CoinSequence",
    "PowerLaw",
    "Homogeneous",
    "Zero",
    "Explicit",
    "Interleaved",
    "Reindexed",
    "Doubled",
    "build_coin",
    "rho_of",
    "local_matrices",
    "theta_block",
]

_UNIT_TOL = 1e-14


def rho_of(gamma):
    """Principal root sqrt(1 - |gamma|^2), clipped at 0 for |gamma| = 1."""
    g = np.asarray(gamma)
    return np.sqrt(np.clip(1.0 - np.abs(g) ** 2, 0.0, None))


def build_coin(gamma: complex) -> np.ndarray:
    """Return the coin matrix ``[[rho, conj(g)], [-g, rho]]``.

    Raises
    ------
    DomainError
        If ``|gamma| > 1``.
    """
    gamma = complex(gamma)
    if abs(gamma) > 1.0 + _UNIT_TOL:
        raise DomainError(f"|gamma| = {abs(gamma)} exceeds 1")
    rho = float(rho_of(gamma))
    return np.array([[rho, gamma.conjugate()], [-gamma, rho]], dtype=complex)


def local_matrices(gamma: complex):
    """The four row-split matrices ``(P, Q, R, S)`` of the coin at one site.

    ``P`` keeps the top row of the coin, ``Q`` the bottom row; ``R`` and
    ``S`` are the same rows moved to the other slot.
    """
    h = build_coin(gamma)
    z = np.zeros(2, dtype=complex)
    P = np.array([h[0], z])
    Q = np.array([z, h[1]])
    R = np.array([h[1], z])
    S = np.array([z, h[0]])
    return P, Q, R, S


def theta_block(gamma: complex) -> np.ndarray:
    """CMV building block ``[[conj(g), rho], [rho, -g]]``."""
    gamma = complex(gamma)
    if abs(gamma) > 1.0 + _UNIT_TOL:
        raise DomainError(f"|gamma| = {abs(gamma)} exceeds 1")
    rho = float(rho_of(gamma))
    return np.array([[gamma.conjugate(), rho], [rho, -gamma]], dtype=complex)


class CoinSequence:
    """Base class: a rule ``j -> gamma_j`` over all integer sites."""

    kind = "abstract"

    def gamma(self, j: int) -> complex:
        raise NotImplementedError

    def gammas(self, sites) -> np.ndarray:
        """Vectorised :meth:`gamma` over an integer array."""
        sites = np.asarray(sites, dtype=np.int64)
        return np.array([self.gamma(int(j)) for j in sites.ravel()], dtype=complex).reshape(sites.shape)

    def rho(self, j: int) -> float:
        return float(rho_of(self.gamma(j)))

    @property
    def is_real(self) -> bool:
        """True when every parameter is real (enables real arithmetic)."""
        return False

    def gamma_hp(self, j: int):
        """``gamma_j`` as a gmpy2 number in the current context precision."""
        g = complex(self.gamma(j))
        if g.imag == 0.0:
            return gmpy2.mpfr(g.real)
        return gmpy2.mpc(g)

    def schur_tail(self, k: int, z):
        """Exact Schur function of ``(gamma_k, gamma_{k+1}, ...)`` at ``z``.

        Returns ``None`` when no closed form is known.
        """
        return None

    def mirrored(self) -> "CoinSequence":
        """The sequence ``k -> gamma_{-k}``."""
        return Reindexed(self, start=0, step=-1)

    def spec(self) -> str:
        """Short textual description (CLI coin-spec syntax where possible)."""
        return self.kind


@dataclass(frozen=True)
class PowerLaw(CoinSequence):
    """``gamma_j = 1/(r + |j|)`` with ``r > 1``.

    Negative sites mirror the positive ones so that the same model can
    drive a walk on the full line.
    """

    r: float
    kind = "powerlaw"

    def __post_init__(self):
        if not self.r > 1:
            raise DomainError("power-law model needs r > 1")

    def gamma(self, j: int) -> complex:
        return complex(1.0 / (self.r + abs(j)))

    def gammas(self, sites) -> np.ndarray:
        sites = np.asarray(sites)
        return (1.0 / (self.r + np.abs(sites))).astype(complex)

    @property
    def is_real(self) -> bool:
        return True

    def gamma_hp(self, j: int):
        return 1 / (gmpy2.mpfr(self.r) + abs(j))

    def schur_tail(self, k: int, z):
        if k < 0:
            return None
        return 1.0 / (self.r + k - (self.r - 1 + k) * z)

    def mirrored(self) -> CoinSequence:
        return self

    def spec(self) -> str:
        return f"powerlaw:{self.r:g}"


@dataclass(frozen=True)
class Homogeneous(CoinSequence):
    """The same parameter at every site."""

    value: complex
    kind = "homogeneous"

    def __post_init__(self):
        if abs(self.value) >= 1:
            raise DomainError("homogeneous coin needs |gamma| < 1")

    def gamma(self, j: int) -> complex:
        return complex(self.value)

    def gammas(self, sites) -> np.ndarray:
        return np.full(np.shape(sites), complex(self.value))

    @property
    def is_real(self) -> bool:
        return complex(self.value).imag == 0.0

    def schur_tail(self, k: int, z):
        # fixed point of f = (g + z f)/(1 + conj(g) z f); the product of the
        # two roots has modulus 1/|z| > 1, so exactly one lies in the disk
        g = complex(self.value)
        z = np.asarray(z, dtype=complex)
        if g == 0:
            return np.zeros_like(z)
        a = g.conjugate() * z
        b = 1.0 - z
        disc = np.sqrt(b * b + 4.0 * a * g)
        with np.errstate(divide="ignore", invalid="ignore"):
            r1 = (-b + disc) / (2.0 * a)
            r2 = (-b - disc) / (2.0 * a)
        f = np.where(np.abs(r1) <= np.abs(r2), r1, r2)
        # z = 0 limit
        f = np.where(z == 0, g, f)
        return f if f.ndim else complex(f)

    def mirrored(self) -> CoinSequence:
        return self

    def spec(self) -> str:
        g = complex(self.value)
        return f"homogeneous:{g.real:g},{g.imag:g}"


@dataclass(frozen=True)
class Zero(CoinSequence):
    """All parameters zero: every coin is the identity."""

    kind = "zero"

    def gamma(self, j: int) -> complex:
        return 0j

    def gammas(self, sites) -> np.ndarray:
        return np.zeros(np.shape(sites), dtype=complex)

    @property
    def is_real(self) -> bool:
        return True

    def gamma_hp(self, j: int):
        return gmpy2.mpfr(0)

    def schur_tail(self, k: int, z):
        return np.zeros_like(np.asarray(z, dtype=complex)) if np.ndim(z) else 0j

    def mirrored(self) -> CoinSequence:
        return self


@dataclass(frozen=True)
class Explicit(CoinSequence):
    """Finite list of parameters; site ``offset + i`` gets ``values[i]``.

    Sites outside the list carry ``fill`` (default 0).  Entries with
    ``|gamma| = 1`` are allowed so that reflecting sites can be modelled.
    """

    values: tuple
    offset: int = 0
    fill: complex = 0j
    kind = "explicit"

    def __init__(self, values: Sequence[complex], offset: int = 0, fill: complex = 0j):
        vals = tuple(complex(v) for v in values)
        if any(abs(v) > 1.0 + _UNIT_TOL for v in vals) or abs(fill) > 1.0 + _UNIT_TOL:
            raise DomainError("explicit coin sequence has |gamma| > 1")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "offset", int(offset))
        object.__setattr__(self, "fill", complex(fill))

    def gamma(self, j: int) -> complex:
        i = j - self.offset
        if 0 <= i < len(self.values):
            return self.values[i]
        return self.fill

    def gammas(self, sites) -> np.ndarray:
        sites = np.asarray(sites, dtype=np.int64)
        idx = sites - self.offset
        inside = (idx >= 0) & (idx < len(self.values))
        out = np.full(sites.shape, self.fill, dtype=complex)
        if self.values:
            arr = np.asarray(self.values, dtype=complex)
            out[inside] = arr[idx[inside]]
        return out

    @property
    def is_real(self) -> bool:
        return all(v.imag == 0.0 for v in self.values) and self.fill.imag == 0.0

    def schur_tail(self, k: int, z):
        if self.fill == 0 and k >= self.offset + len(self.values):
            return np.zeros_like(np.asarray(z, dtype=complex)) if np.ndim(z) else 0j
        return None

    def spec(self) -> str:
        return f"explicit[{len(self.values)}]"


@dataclass(frozen=True)
class Interleaved(CoinSequence):
    """``(a_0, 0, a_1, 0, a_2, ...)`` built from a base sequence ``a``.

    Negative indices carry 0.
    """

    base: CoinSequence
    kind = "interleaved"

    def gamma(self, j: int) -> complex:
        if j < 0 or j % 2:
            return 0j
        return self.base.gamma(j // 2)

    @property
    def is_real(self) -> bool:
        return self.base.is_real

    def schur_tail(self, k: int, z):
        if k < 0:
            return None
        z2 = np.asarray(z, dtype=complex) ** 2
        if k % 2 == 0:
            return self.base.schur_tail(k // 2, z2)
        t = self.base.schur_tail(k // 2 + 1, z2)
        return None if t is None else z * t

    def spec(self) -> str:
        return f"interleaved({self.base.spec()})"


@dataclass(frozen=True)
class Reindexed(CoinSequence):
    """``k -> s * c(base.gamma(start + step*k))`` with optional conjugation.

    ``s = -1`` when ``negate`` is set; ``c`` is complex conjugation when
    ``conj`` is set.
    """

    base: CoinSequence
    start: int = 0
    step: int = 1
    conj: bool = False
    negate: bool = False
    kind = "reindexed"

    def gamma(self, j: int) -> complex:
        g = complex(self.base.gamma(self.start + self.step * j))
        if self.conj:
            g = g.conjugate()
        return -g if self.negate else g

    def gammas(self, sites) -> np.ndarray:
        g = self.base.gammas(self.start + self.step * np.asarray(sites, dtype=np.int64))
        if self.conj:
            g = np.conj(g)
        return -g if self.negate else g

    @property
    def is_real(self) -> bool:
        return self.base.is_real

    def schur_tail(self, k: int, z):
        if self.step != 1:
            return None
        zz = np.conj(z) if self.conj else z
        f = self.base.schur_tail(self.start + k, zz)
        if f is None:
            return None
        if self.conj:
            f = np.conj(f)
        return -f if self.negate else f


@dataclass(frozen=True)
class Doubled(CoinSequence):
    """Full-line sequence that makes a line walk mimic a half-line walk.

    Even sites ``2j`` (``j >= 0``) carry ``base.gamma(j)``, odd sites carry 0,
    and site ``-1`` carries ``-1`` (a perfect reflector).  Other negative
    sites carry 0; they are never reached.
    """

    base: CoinSequence
    kind = "doubled"

    def gamma(self, j: int) -> complex:
        if j == -1:
            return -1 + 0j
        if j < 0 or j % 2:
            return 0j
        return self.base.gamma(j // 2)

    @property
    def is_real(self) -> bool:
        return self.base.is_real
