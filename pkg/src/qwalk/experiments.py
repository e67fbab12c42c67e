"""Simulation-versus-theory comparisons shared by the CLI, tests and demos."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import logsumexp

from .coins import Homogeneous, PowerLaw
from .limits import PowerLawModel, bottom_profile, h2_profiles, homogeneous_limits, ld_rate, origin_profile
from .walk import WalkKind, distribution, dual_distribution, evolve, log_distribution

__all__ = [
    "ProfileRow",
    "ProfileComparison",
    "compare_profiles",
    "ld_precision",
    "log_tail_probability",
    "LDRow",
    "ld_estimate",
    "weak_limit_tv",
    "decay_fit",
]


@dataclass(frozen=True)
class ProfileRow:
    region: str  # "origin" or "bottom"
    j: int
    simulated: float
    predicted: float

    @property
    def residual(self) -> float:
        return abs(self.simulated - self.predicted)


@dataclass
class ProfileComparison:
    rows: list
    c0_partial: float
    c1_partial: float

    @property
    def max_residual(self) -> float:
        return max(r.residual for r in self.rows)


def compare_profiles(coins, phi, n: int, J: int, kind="h1") -> ProfileComparison:
    """Simulate and tabulate ``mu_n(j)`` and ``mu~_n(j)`` against their limits.

    Power-law coins use the power-law limit laws (H1 or H2); homogeneous
    coins use the localization profile at the origin and a vanishing front.
    """
    kind = WalkKind.parse(kind)
    state = evolve(phi, n, kind, coins)
    mu, dual = distribution(state), dual_distribution(state)
    js = np.arange(J + 1)
    if isinstance(coins, PowerLaw):
        model = PowerLawModel(coins.r)
        if kind is WalkKind.H1:
            po, pb = origin_profile(model, phi, js), bottom_profile(model, phi, js)
        elif kind is WalkKind.H2:
            po, _ = h2_profiles(model, js, n)
            _, pb = h2_profiles(model, js)
        else:
            raise ValueError("no power-law limit law for the full-line walk")
    elif isinstance(coins, Homogeneous):
        lim = homogeneous_limits(coins.value, phi, kind)
        po = lim.localization(js, n)
        pb = np.zeros(len(js))
    else:
        raise ValueError("closed forms exist only for power-law or homogeneous coins")
    rows = [ProfileRow("origin", int(j), mu[int(j)], float(p)) for j, p in zip(js, po)]
    rows += [ProfileRow("bottom", int(j), dual[int(j)], float(p)) for j, p in zip(js, pb)]
    c0 = sum(mu[int(j)] for j in js)
    # front sites already counted near the origin (n <= 2J) are skipped
    c1 = sum(dual[int(j)] for j in js if n - j > J)
    return ProfileComparison(rows, float(c0), float(c1))


def ld_precision(n: int, tau: float, guard: int = 64) -> int:
    """gmpy2 bits so that amplitudes down to ``|tau|^n`` clear the rounding floor."""
    return guard + int(math.ceil(n * math.log2(1.0 / abs(tau))))


def log_tail_probability(state, eps: float) -> float:
    """``log P(1 - X_n/n > eps)`` accumulated in the log domain."""
    sites, logmu = log_distribution(state)
    n = state.time
    mask = (n - sites) > n * eps
    if not np.any(mask):
        return -np.inf
    return float(logsumexp(logmu[mask]))


@dataclass(frozen=True)
class LDRow:
    eps: float
    ns: tuple
    log_p: tuple
    slope: float
    theory: float

    @property
    def rel_error(self) -> float:
        if self.theory == 0:
            return abs(self.slope)
        return abs(self.slope - self.theory) / abs(self.theory)


def _ld_run(args):
    r, phi, n = args
    model = PowerLawModel(r)
    bits = ld_precision(n, model.tau)
    if phi is None:
        phi = model.orthogonal_state_hp(bits)
    return evolve(phi, n, WalkKind.H1, model.coins, precision=bits)


def ld_estimate(r: float, eps_list, ns=(400, 800, 1600), phi=None, jobs: int = 1) -> list[LDRow]:
    """Fit the decay rate of ``P(1 - X_n/n > eps)`` along ``ns``.

    ``phi`` defaults to the state orthogonal to the origin-localization
    vector, which is where the rate law applies; it is then built directly
    in multiprecision, since a double-rounded state keeps a ~1e-17 overlap
    whose origin-localized mass would swamp the tail.  Each walk runs in
    gmpy2 arithmetic with :func:`ld_precision` bits.
    """
    model = PowerLawModel(r)
    if phi is not None:
        phi = tuple(complex(x) for x in phi)
    tasks = [(r, phi, int(n)) for n in ns]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as ex:
            states = list(ex.map(_ld_run, tasks))
    else:
        states = [_ld_run(t) for t in tasks]
    out = []
    for eps in eps_list:
        logs = [log_tail_probability(s, eps) for s in states]
        slope = float(np.polyfit(np.asarray(ns, dtype=float), np.asarray(logs), 1)[0])
        out.append(LDRow(float(eps), tuple(int(n) for n in ns), tuple(logs), slope, ld_rate(model, eps)))
    return out


def _bin_integral(lim, a: float, b: float) -> float:
    """Integral of ``w f_K`` over [a, b] inside (-rho, rho), via x = rho sin(t)."""
    rho = lim.rho
    g = math.sqrt(1 - rho * rho)
    ta, tb = math.asin(max(-1.0, a / rho)), math.asin(min(1.0, b / rho))

    def integrand(t):
        x = rho * math.sin(t)
        return float(lim.weight(x)) * g / (math.pi * (1 - x * x))

    val, _ = integrate.quad(integrand, ta, tb, epsabs=1e-12, epsrel=1e-10)
    return val


def weak_limit_tv(gamma: complex, phi, kind, n: int, bins: int = 50) -> float:
    """Total-variation distance between ``X_n/n`` and its weak limit.

    Histogram on ``bins`` equal cells over ``(-rho, rho)``; simulated mass
    outside the window counts fully towards the distance.
    """
    kind = WalkKind.parse(kind)
    lim = homogeneous_limits(gamma, phi, kind)
    d = distribution(evolve(phi, n, kind, Homogeneous(gamma)))
    x = d.sites / n
    edges = np.linspace(-lim.rho, lim.rho, bins + 1)
    idx = np.searchsorted(edges, x, side="right") - 1
    inside = (idx >= 0) & (idx < bins)
    emp = np.bincount(idx[inside], weights=d.values[inside], minlength=bins)
    theo = np.array([_bin_integral(lim, edges[k], edges[k + 1]) for k in range(bins)])
    k0 = np.searchsorted(edges, 0.0, side="right") - 1
    theo[k0] += lim.c
    return float(0.5 * (np.sum(np.abs(emp - theo)) + d.values[~inside].sum()))


def decay_fit(gamma: complex, phi, kind, n: int, js=range(2, 13)) -> tuple[float, float]:
    """Fitted geometric base of ``mu_n(j)`` over ``js`` and the predicted ``nu^2``.

    For H2 only sites with ``n + j`` even enter the fit.
    """
    kind = WalkKind.parse(kind)
    lim = homogeneous_limits(gamma, phi, kind)
    mu = distribution(evolve(phi, n, kind, Homogeneous(gamma)))
    js = np.array([j for j in js if kind is not WalkKind.H2 or (n + j) % 2 == 0])
    logs = np.log([mu[int(j)] for j in js])
    slope = np.polyfit(js.astype(float), logs, 1)[0]
    return float(np.exp(slope)), float(lim.nu**2)
