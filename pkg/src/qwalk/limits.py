"""Closed-form limit laws for the power-law and homogeneous walks.

Power-law model: ``gamma_j = 1/(r + j)`` on the half line with ``r > 1``.
Started from ``phi = (alpha, beta)`` the H1 walk splits its mass between a
power-law profile pinned at the origin and a geometric profile pinned at the
ballistic front ``j = n``.  The passage weights decompose exactly as

    Xi_n(j) = L_j + I_j(n) + B_{n-j}(n),

where ``L_j`` does not depend on ``n`` (origin localization), ``B`` is
concentrated near the front and ``I`` is an interference term decaying
like ``tau^(n-j)``, ``tau = (1 - r)/r``.

Homogeneous references (constant ``gamma``) give the weak-limit weights and
localization profiles used to validate the simulator.
"""
from __future__ import annotations

from dataclasses import dataclass
from types import SimpleNamespace
from typing import Callable

import numpy as np

from .coins import PowerLaw
from .errors import DomainError, PreconditionError, SingularEvaluationError
from .walk import WalkKind

__all__ = [
    "PowerLawModel",
    "InitialCoinState",
    "LimitProfile",
    "origin_profile",
    "bottom_profile",
    "limit_profile",
    "limit_constants",
    "decomposition_terms",
    "bottom_limit",
    "ld_rate",
    "h2_profiles",
    "h2_constants",
    "HomogeneousLimits",
    "homogeneous_limits",
    "f_K",
    "nu_I",
    "nu_II",
    "closed_forms",
]


@dataclass(frozen=True)
class PowerLawModel:
    """Power-law coin model and the constant vectors of its limit laws."""

    r: float

    def __post_init__(self):
        if not self.r > 1:
            raise DomainError("power-law model needs r > 1")

    @property
    def coins(self) -> PowerLaw:
        return PowerLaw(self.r)

    @property
    def tau(self) -> float:
        return (1.0 - self.r) / self.r

    @property
    def b_E(self) -> np.ndarray:
        r = self.r
        return np.array([1 - r - r * r, (r - 1) * np.sqrt(r * r - 1)])

    @property
    def b_0(self) -> np.ndarray:
        r = self.r
        return np.array([2 * r - 1, -(r - 1) * np.sqrt(r * r - 1)])

    @property
    def b_1(self) -> np.ndarray:
        return np.array([1.0, 0.0])

    @property
    def l(self) -> np.ndarray:
        r = self.r
        return np.array([np.sqrt(r - 1), np.sqrt(r + 1)])

    @property
    def rho0(self) -> float:
        r = self.r
        return np.sqrt(r * r - 1) / r

    def orthogonal_state(self) -> "InitialCoinState":
        """Unit state annihilated by ``l``: no localization at the origin."""
        v = np.array([np.sqrt(self.r + 1), -np.sqrt(self.r - 1)])
        v = v / np.linalg.norm(v)
        return InitialCoinState(complex(v[0]), complex(v[1]))

    def orthogonal_state_hp(self, precision: int):
        """:meth:`orthogonal_state` as gmpy2 reals at ``precision`` bits."""
        import gmpy2

        with gmpy2.context(precision=precision):
            r = gmpy2.mpfr(self.r)
            return gmpy2.sqrt((r + 1) / (2 * r)), -gmpy2.sqrt((r - 1) / (2 * r))


@dataclass(frozen=True)
class InitialCoinState:
    alpha: complex
    beta: complex

    def __post_init__(self):
        if abs(abs(self.alpha) ** 2 + abs(self.beta) ** 2 - 1) > 1e-14:
            raise PreconditionError("coin state must satisfy |alpha|^2 + |beta|^2 = 1")

    @classmethod
    def normalized(cls, alpha, beta) -> "InitialCoinState":
        n = np.sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
        if n == 0:
            raise PreconditionError("zero coin state")
        return cls(complex(alpha) / n, complex(beta) / n)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.alpha, self.beta], dtype=complex)


def _state(phi) -> np.ndarray:
    if isinstance(phi, InitialCoinState):
        return phi.vector
    v = np.asarray(phi, dtype=complex)
    if abs(np.vdot(v, v).real - 1) > 1e-12:
        raise PreconditionError("coin state must be normalised")
    return v


def _origin_mass(model: PowerLawModel, phi) -> float:
    r = model.r
    a, b = _state(phi)
    amp = a * np.sqrt(1 - 1 / r) + b * np.sqrt(1 + 1 / r)
    return 2 * r * r / ((1 + r) ** 2 * (1 - 2 * r) ** 2) * abs(amp) ** 2


def origin_profile(model: PowerLawModel, phi, j):
    """Limit of ``mu_n(j)``: ``(r^2-1)/((r-1+j)(r+1+j)) * mu_o``."""
    r = model.r
    j = np.asarray(j, dtype=float)
    return (r * r - 1) / ((r - 1 + j) * (r + 1 + j)) * _origin_mass(model, phi)


def _bottom_coeffs(model: PowerLawModel, phi):
    r = model.r
    a, b = _state(phi)
    p0 = r / (r + 1) * abs(-a / r + b * np.sqrt(1 - 1 / r**2)) ** 2
    p1 = (r - 1) / r * abs(a * np.sqrt(1 - 1 / r**2) + b / r) ** 2
    pe = abs(a * (r * r + r - 1) / (r - 1) - b * np.sqrt(r * r - 1)) ** 2 / (r * (r + 1) * (r - 1) ** 2)
    return p0, p1, pe


def bottom_profile(model: PowerLawModel, phi, j):
    """Limit of the dual distribution ``mu~_n(j) = mu_n(n - j)``."""
    p0, p1, pe = _bottom_coeffs(model, phi)
    j = np.asarray(j)
    out = np.where(j == 0, p0, np.where(j == 1, p1, pe * model.tau ** (2.0 * j)))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class LimitProfile:
    origin: Callable
    bottom: Callable
    c0: float
    c1: float


def limit_constants(model: PowerLawModel, phi) -> tuple[float, float]:
    """Total origin mass ``c0`` and bottom mass ``c1`` (closed-form sums)."""
    r = model.r
    c0 = _origin_mass(model, phi) * (r * r - 1) * 0.5 * (1 / (r - 1) + 1 / r)
    p0, p1, pe = _bottom_coeffs(model, phi)
    t2 = model.tau**2
    c1 = p0 + p1 + pe * t2 * t2 / (1 - t2)
    return float(c0), float(c1)


def limit_profile(model: PowerLawModel, phi) -> LimitProfile:
    c0, c1 = limit_constants(model, phi)
    return LimitProfile(lambda j: origin_profile(model, phi, j), lambda j: bottom_profile(model, phi, j), c0, c1)


def _e_R():
    return np.array([0.0, 1.0])


def _L_term(model, j):
    r = model.r
    pref = np.sqrt(r * (r - 1) / ((r + 1) * (2 * r - 1) ** 2)) / np.sqrt(r + j)
    col = np.array([1 / np.sqrt(r + 1 + j), 1 / np.sqrt(r - 1 + j)])
    return pref * np.outer(col, model.l)


def _I_term(model, n, j):
    r, tau = model.r, model.tau
    c = r**1.5 / (np.sqrt(r + 1) * (2 * r - 1) * (r - 1) ** 2)
    col = np.array([1 / np.sqrt(r + j + 1), 1 / np.sqrt(r + j - 1)])
    if j == 0:
        # the origin's lower entry picks up one extra factor tau
        col[1] *= tau
    return c * tau ** (n - j) / np.sqrt(r + j) * np.outer(col, model.b_E)


def _front_weight(model, n, d):
    """Exact ``Xi_n(n - d)`` for ``d`` in {0, 1} (single-path weights)."""
    r = model.r
    rho0 = model.rho0
    if d == 0:
        fac = np.sqrt(r / (r + 1) * (1 + 1 / (r + n - 1)))
        return fac * np.outer(_e_R(), [-1 / r, rho0])
    fac = np.sqrt((r - 1) / r * (1 + 1 / (r + n - 2)))
    return fac * np.outer(_e_R(), [rho0, 1 / r])


def _B_term(model, n, j):
    r = model.r
    d = n - j
    if n == 0:
        return np.eye(2) - _L_term(model, 0) - _I_term(model, 0, 0)
    if d <= 1:
        return _front_weight(model, n, d) - _L_term(model, j) - _I_term(model, n, j)
    if j == 0:
        return np.zeros((2, 2))
    pref = -np.sqrt((r + j) / (r + j - 1)) / np.sqrt(r * (r + 1) * (r - 1) ** 4)
    return pref * model.tau**d * np.outer(_e_R(), model.b_E)


def decomposition_terms(model: PowerLawModel, n: int, j: int):
    """``(B, L, I)`` with ``B + L + I = Xi_n(j)`` for the H1 power-law walk.

    ``L`` is the time-independent origin part, ``I`` decays like
    ``tau^(n-j)`` and ``B`` carries the front.  For the two sites nearest the
    front (and for ``n = 0``) ``B`` is the single-path weight minus the other
    two terms; away from the front it vanishes at the origin itself.
    """
    if not 0 <= j <= n:
        raise PreconditionError("need 0 <= j <= n")
    return _B_term(model, n, j), _L_term(model, j), _I_term(model, n, j)


def bottom_limit(model: PowerLawModel, d: int) -> np.ndarray:
    """``lim_n B_{n-d}(n)`` as a 2x2 matrix."""
    r = model.r
    k = 1 / np.sqrt(r * (r + 1) * (r - 1) ** 4)
    v = model.tau**d * model.b_E
    if d == 0:
        v = v + r * model.b_0
    elif d == 1:
        v = v - r * r * (r - 1) * model.b_1
    return -k * np.outer(_e_R(), v)


def ld_rate(model: PowerLawModel, eps):
    """Decay rate ``eps * log(tau^2)`` of ``P(1 - X_n/n > eps)``."""
    return np.asarray(eps) * np.log(model.tau**2) if np.ndim(eps) else float(eps * np.log(model.tau**2))


def h2_profiles(model: PowerLawModel, j, n: int | None = None):
    """Origin and bottom limits for the reflecting (H2) walk started at (1, 0).

    Without ``n`` the origin value is the limit along the subsequence with
    ``n + j`` even; with ``n`` the parity factor ``(1 + (-1)^(n+j))/2`` is
    applied.
    """
    r = model.r
    j = np.asarray(j)
    jf = j.astype(float)
    origin = np.where(j == 0, 1 / (r + 1) ** 2, (2 * r / (r + 1)) / ((r - 1 + jf) * (r + 1 + jf)))
    if n is not None:
        origin = origin * ((n + j) % 2 == 0)
    bottom = np.where(j == 0, 1 - 1 / (1 + r), 0.0)
    if origin.ndim == 0:
        return float(origin), float(bottom)
    return origin, bottom


def h2_constants(model: PowerLawModel) -> tuple[float, float]:
    """``(c0, c1)`` for H2; ``c0`` is the mass along either parity class."""
    r = model.r
    return 1 / (r + 1), r / (r + 1)


def f_K(x, rho: float):
    """Weak-limit density ``|gamma| / (pi (1 - x^2) sqrt(rho^2 - x^2))`` on ``|x| < rho``."""
    x = np.asarray(x, dtype=float)
    g = np.sqrt(1 - rho * rho)
    with np.errstate(invalid="ignore", divide="ignore"):
        val = g / (np.pi * (1 - x * x) * np.sqrt(rho * rho - x * x))
    out = np.where(np.abs(x) < rho, val, 0.0)
    return out if out.ndim else float(out)


def nu_I(gamma: complex) -> float:
    g = complex(gamma)
    rho = np.sqrt(1 - abs(g) ** 2)
    return float(np.sign(g.real) / rho * (np.sqrt(1 - g.imag**2) - abs(g.real)))


def nu_II(gamma: complex) -> float:
    g = complex(gamma)
    return float(np.sqrt(1 - abs(g) ** 2) / abs(1 + g))


@dataclass(frozen=True)
class HomogeneousLimits:
    """Weak limit ``X_n/n => c delta_0 + w(x) f_K(x; rho)`` and localization.

    ``localization(j, n=None)`` is the limit of ``P(X_n = j)``; for H2 it
    carries the parity factor when ``n`` is given and is the even-class
    value otherwise.
    """

    gamma: complex
    kind: WalkKind
    rho: float
    nu: float
    c: float
    weight: Callable
    localization: Callable

    def density(self, x):
        return self.weight(x) * f_K(x, self.rho)


def homogeneous_limits(gamma: complex, phi, kind) -> HomogeneousLimits:
    """Reference limits for the constant-parameter walks."""
    kind = WalkKind.parse(kind)
    g = complex(gamma)
    if not 0 < abs(g) < 1:
        raise DomainError("need 0 < |gamma| < 1")
    a, b = _state(phi)
    rho = float(np.sqrt(1 - abs(g) ** 2))
    re, im = g.real, g.imag

    if kind is WalkKind.D:
        slope = abs(a) ** 2 - abs(b) ** 2 + 2 * (g * a * np.conj(b)).real / rho

        def weight(x):
            return 1 - slope * np.asarray(x, dtype=float)

        def loc(j, n=None):
            return 0.0 * np.asarray(j, dtype=float)

        return HomogeneousLimits(g, kind, rho, 0.0, 0.0, weight, loc)

    if kind is WalkKind.H1:
        nu = nu_I(g)
        amp = re * re / (1 - im * im) * abs(b + a * nu) ** 2 * (1 + nu * nu)
        c = float(amp / (1 - nu * nu))
        # the x^2/(Re^2 + Im^2 x^2) shape carries the remaining mass 1 - c
        scale = 2 * abs(g) ** 2 * (1 - c) / (1 - abs(re) / np.sqrt(1 - im * im))

        def weight(x):
            x = np.asarray(x, dtype=float)
            return np.where(x >= 0, scale * x * x / (re * re + im * im * x * x), 0.0)

        def loc(j, n=None):
            return amp * nu ** (2.0 * np.asarray(j, dtype=float))

        return HomogeneousLimits(g, kind, rho, nu, c, weight, loc)

    # H2: requires phi = (1, 0) up to a phase
    if abs(b) > 1e-12:
        raise PreconditionError("H2 references need the coin state (1, 0)")
    nu = nu_II(g)
    x2 = abs(g) ** 2 + re
    on = 1.0 if x2 > 0 else 0.0
    c = on * 2 * x2 / abs(1 + g) ** 2

    def weight(x):
        x = np.asarray(x, dtype=float)
        return np.where(x >= 0, 2 * abs(g) ** 2 * (1 + re) * x * x / (x2 * x2 + im * im * x * x), 0.0)

    def loc(j, n=None):
        j = np.asarray(j)
        base = on * (2 * x2 / abs(1 + g) ** 2) ** 2 * (1 + (j >= 1) / nu**2) * nu ** (2.0 * j)
        if n is not None:
            base = base * ((n + j) % 2 == 0)
        return base

    return HomogeneousLimits(g, kind, rho, nu, float(c), weight, loc)


def closed_forms(model: PowerLawModel) -> SimpleNamespace:
    """Closed-form Schur, g-, Caratheodory functions and spectral measure.

    ``schur(j, z)`` is the Schur function of ``(gamma_j, gamma_{j+1}, ...)``;
    ``caratheodory`` and ``weight``/``mass`` describe the measure whose
    Schur function is ``f_0(z^2)`` (the walk's measure at ``(0, R)``).
    """
    r = model.r

    def _check(den):
        if np.any(np.abs(den) < 1e-14):
            raise SingularEvaluationError("pole of closed form")
        return den

    def schur(j, z):
        return 1 / _check(r + j - (r - 1 + j) * z)

    def g(j, z):
        return z * z / _check(r + 1 + j - (r + j) * z * z)

    c = r / (r - 1)

    def caratheodory(z):
        return (z + 1) * (z - c) / _check((z - 1) * (z + c))

    def weight(theta):
        c2 = np.cos(np.asarray(theta) / 2) ** 2
        return c2 / (c2 + 1 / (4 * r * (r - 1)))

    def lam(k, z):
        return z * np.sqrt((r + k - 1) / (r + k + 1)) * (r + k + 1 - (r + k) * z * z) / _check(r + k - (r + k - 1) * z * z)

    def lam_product(j, z):
        """``lambda+_j ... lambda+_1`` in closed form."""
        s = np.sqrt(r * (r + 1) / ((r + j) * (r + j + 1)))
        return z**j * s * (r + j + 1 - (r + j) * z * z) / _check(r + 1 - r * z * z)

    def h1_prefactor(z):
        """Scalar prefactor 1/(1 - conj(g0) z + (g0 - z) g+_0(z)) of the origin function."""
        return -(r * r) / (1 - r * r) * (z * z - (r + 1) / r) / _check((z - r / (1 - r)) * (z - 1))

    return SimpleNamespace(schur=schur, g=g, caratheodory=caratheodory, weight=weight,
                           mass=1 / (2 * r - 1), mass_angle=0.0, lam=lam, lam_product=lam_product,
                           h1_prefactor=h1_prefactor)
