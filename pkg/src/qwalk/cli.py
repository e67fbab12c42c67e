"""Command-line front end.

Subcommands: ``simulate``, ``spectrum``, ``compare``, ``ldrate``, ``verify``.
Tables are written as CSV with ``#``-prefixed metadata lines, or as JSON.

Exit codes: 0 success, 1 failed check, 2 configuration (or I/O) error,
3 numerical non-convergence.
"""
from __future__ import annotations

import argparse
import dataclasses
import io
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .coins import CoinSequence, Explicit, Homogeneous, Interleaved, PowerLaw, Zero
from .errors import (
    ConfigError,
    DomainError,
    NumericalLimitError,
    PreconditionError,
    SingularEvaluationError,
)
from .walk import WalkKind

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3
COMMANDS = ("simulate", "spectrum", "compare", "ldrate", "verify")


def parse_complex(text) -> complex:
    """Accept ``"0.5"``, ``"0.5,0.1"`` (re,im) or ``"0.5+0.1j"``."""
    if isinstance(text, (int, float, complex)):
        return complex(text)
    s = str(text).strip()
    try:
        if "," in s:
            re_, im_ = s.split(",", 1)
            return complex(float(re_), float(im_))
        return complex(s.replace(" ", ""))
    except ValueError as exc:
        raise ConfigError(f"cannot parse complex number {text!r}") from exc


def _float_list(text) -> list[float]:
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad number list {text!r}") from exc


def _int_list(text) -> list[int]:
    try:
        return [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad integer list {text!r}") from exc


def load_coin_file(path: str) -> Explicit:
    """One parameter per line as ``re im`` (``im`` optional); line i is site i."""
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read coin file {path}: {exc}") from exc
    vals = []
    for k, line in enumerate(lines):
        s = line.split("#", 1)[0].strip()
        if not s:
            continue
        parts = s.replace(",", " ").split()
        try:
            g = complex(float(parts[0]), float(parts[1]) if len(parts) > 1 else 0.0)
        except (ValueError, IndexError) as exc:
            raise ConfigError(f"{path}:{k + 1}: expected 're im'") from exc
        if abs(g) >= 1:
            raise ConfigError(f"{path}:{k + 1}: |gamma| = {abs(g):.6g} must be < 1")
        vals.append(g)
    if not vals:
        raise ConfigError(f"coin file {path} is empty")
    return Explicit(vals)


def parse_coin(spec: str) -> CoinSequence:
    """``powerlaw:r`` | ``homogeneous:re,im`` | ``zero`` | ``file:path``."""
    kind, _, arg = str(spec).partition(":")
    kind = kind.strip().lower()
    try:
        if kind == "powerlaw":
            r = float(arg)
            if not r > 1:
                raise ConfigError("powerlaw needs r > 1")
            return PowerLaw(r)
        if kind == "homogeneous":
            g = parse_complex(arg)
            if not 0 <= abs(g) < 1:
                raise ConfigError("homogeneous needs |gamma| < 1")
            return Homogeneous(g)
        if kind == "zero":
            return Zero()
        if kind == "file":
            return load_coin_file(arg)
    except ConfigError:
        raise
    except (ValueError, DomainError) as exc:
        raise ConfigError(f"bad coin spec {spec!r}: {exc}") from exc
    raise ConfigError(f"unknown coin spec {spec!r}")


def _cjson(z: complex) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


@dataclass
class RunConfig:
    """Everything a command needs; round-trips through :meth:`to_dict`/:meth:`to_argv`."""

    command: str
    walk: str = "h1"
    coin: str = "powerlaw:3"
    n: int = 200
    alpha: complex = 1 + 0j
    beta: complex = 0j
    format: str = "csv"
    output: str | None = None
    tol: float | None = None
    depth: int | None = None
    J: int = 10
    eps: tuple = (0.2, 0.4, 0.6)
    ns: tuple = (400, 800, 1600)
    grid: int = 256
    candidates: tuple = (0.0,)
    measure: str = "walk"
    auto_ortho: bool = False
    strict: bool = False
    jobs: int = 1
    all_sites: bool = False

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["alpha"], d["beta"] = _cjson(self.alpha), _cjson(self.beta)
        for k in ("eps", "ns", "candidates"):
            d[k] = list(d[k])
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        d = dict(d)
        for k in ("alpha", "beta"):
            v = d.get(k)
            if isinstance(v, dict):
                d[k] = complex(v["re"], v["im"])
        for k in ("eps", "ns", "candidates"):
            if k in d:
                d[k] = tuple(d[k])
        return cls(**d)

    def to_argv(self) -> list[str]:
        a, b = complex(self.alpha), complex(self.beta)
        # --flag=value keeps negative numbers from reading as options
        opts = {"walk": self.walk, "coin": self.coin, "n": self.n,
                "alpha": f"{a.real!r},{a.imag!r}", "beta": f"{b.real!r},{b.imag!r}",
                "format": self.format, "J": self.J,
                "eps": ",".join(repr(float(e)) for e in self.eps),
                "ns": ",".join(str(int(n)) for n in self.ns), "grid": self.grid,
                "candidates": ",".join(repr(float(t)) for t in self.candidates),
                "measure": self.measure, "jobs": self.jobs,
                "output": self.output, "tol": None if self.tol is None else repr(self.tol), "depth": self.depth}
        argv = [self.command] + [f"--{k}={v}" for k, v in opts.items() if v is not None]
        for flag, on in (("--auto-ortho", self.auto_ortho), ("--strict", self.strict), ("--all-sites", self.all_sites)):
            if on:
                argv.append(flag)
        return argv

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        try:
            kind = WalkKind.parse(self.walk)
        except ValueError as exc:
            raise ConfigError(f"unknown walk kind {self.walk!r}") from exc
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if self.n < 0:
            raise ConfigError("n must be non-negative")
        if abs(self.alpha) == 0 and abs(self.beta) == 0:
            raise ConfigError("coin state (alpha, beta) is zero")
        if kind is WalkKind.H2 and abs(self.beta) > 1e-12:
            raise ConfigError("h2 walks require beta = 0")
        if self.jobs < 1:
            raise ConfigError("--jobs must be >= 1")
        if self.measure not in ("walk", "cmv"):
            raise ConfigError("measure must be 'walk' or 'cmv'")
        if any(not 0 <= e < 1 for e in self.eps):
            raise ConfigError("eps values must lie in [0, 1)")

    @property
    def phi(self) -> tuple[complex, complex]:
        a, b = complex(self.alpha), complex(self.beta)
        s = np.sqrt(abs(a) ** 2 + abs(b) ** 2)
        return a / s, b / s


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qwalk", description="Quantum walks on the half line and line.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--walk", default="h1", help="h1, h2 or d")
        s.add_argument("--coin", default="powerlaw:3", help="powerlaw:r | homogeneous:re,im | zero | file:path")
        s.add_argument("--n", type=int, default=200)
        s.add_argument("--alpha", default="1")
        s.add_argument("--beta", default="0")
        s.add_argument("--format", default="csv", choices=["csv", "json"])
        s.add_argument("--output", default=None)
        s.add_argument("--tol", type=float, default=None, help="continued-fraction convergence tolerance")
        s.add_argument("--depth", type=int, default=None, help="fixed continued-fraction depth")
        s.add_argument("--J", type=int, default=10, help="sites per profile in compare")
        s.add_argument("--eps", default="0.2,0.4,0.6")
        s.add_argument("--ns", default="400,800,1600")
        s.add_argument("--grid", type=int, default=256)
        s.add_argument("--candidates", default="0", help="angles searched for point masses")
        s.add_argument("--measure", default="walk", choices=["walk", "cmv"])
        s.add_argument("--auto-ortho", action="store_true")
        s.add_argument("--strict", action="store_true")
        s.add_argument("--jobs", type=int, default=1)
        s.add_argument("--all-sites", action="store_true", help="keep zero-probability rows")
    return p


def config_from_args(argv) -> RunConfig:
    ns = build_parser().parse_args(argv)
    cfg = RunConfig(
        command=ns.command, walk=ns.walk.lower(), coin=ns.coin, n=ns.n,
        alpha=parse_complex(ns.alpha), beta=parse_complex(ns.beta), format=ns.format,
        output=ns.output, tol=ns.tol, depth=ns.depth, J=ns.J,
        eps=tuple(_float_list(ns.eps)), ns=tuple(_int_list(ns.ns)), grid=ns.grid,
        candidates=tuple(_float_list(ns.candidates)), measure=ns.measure,
        auto_ortho=ns.auto_ortho, strict=ns.strict, jobs=ns.jobs, all_sites=ns.all_sites,
    )
    cfg.validate()
    return cfg


# ---------------------------------------------------------------- output


@dataclass
class Table:
    columns: list
    rows: list
    name: str | None = None


@dataclass
class Report:
    metadata: dict
    tables: list
    footer: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        out = io.StringIO()
        for k, v in self.metadata.items():
            _meta_line(out, k, v)
        for t in self.tables:
            if t.name:
                out.write(f"# section={t.name}\n")
            out.write(",".join(t.columns) + "\n")
            for row in t.rows:
                out.write(",".join(_fmt(v) for v in row) + "\n")
        for k, v in self.footer.items():
            _meta_line(out, k, v)
        return out.getvalue()

    def to_json(self) -> str:
        doc = {"metadata": _jsonable(self.metadata)}
        for t in self.tables:
            doc[t.name or "rows"] = [dict(zip(t.columns, (_jsonable(v) for v in row))) for row in t.rows]
        if self.footer:
            doc["summary"] = _jsonable(self.footer)
        return json.dumps(doc, indent=2, allow_nan=True) + "\n"


def _meta_line(out, k, v) -> None:
    if isinstance(v, (complex, np.complexfloating)):
        out.write(f"# {k}_re={float(v.real)!r}\n# {k}_im={float(v.imag)!r}\n")
    else:
        out.write(f"# {k}={_fmt(v)}\n")


def _fmt(v) -> str:
    if isinstance(v, complex):
        return f"{v.real!r};{v.imag!r}"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (list, tuple)):
        return ";".join(_fmt(x) for x in v)
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (complex, np.complexfloating)):
        return _cjson(v)
    if isinstance(v, np.floating):
        return float(v)
    if isinstance(v, np.integer):
        return int(v)
    return v


def _emit(cfg: RunConfig, report: Report, stdout) -> None:
    text = report.to_json() if cfg.format == "json" else report.to_csv()
    if cfg.output is None:
        stdout.write(text)
        return
    try:
        Path(cfg.output).write_text(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {cfg.output}: {exc}") from exc


def _base_meta(cfg: RunConfig, coins: CoinSequence) -> dict:
    a, b = cfg.phi
    return {"command": cfg.command, "walk": cfg.walk, "coin": cfg.coin, "n": cfg.n, "alpha": a, "beta": b}


# ---------------------------------------------------------------- commands


def cmd_simulate(cfg: RunConfig):
    from .walk import distribution, dual_distribution, evolve

    coins = parse_coin(cfg.coin)
    state = evolve(cfg.phi, cfg.n, cfg.walk, coins)
    mu, dual = distribution(state), dual_distribution(state)
    rows = []
    for j, p in zip(mu.sites, mu.values):
        if p > 0 or cfg.all_sites:
            dj = cfg.n - int(j)
            rows.append((int(j), float(p), dj, dual[dj]))
    total = mu.total()
    meta = _base_meta(cfg, coins)
    report = Report(meta, [Table(["j", "prob", "dual_j", "dual_prob"], rows)],
                    {"total_probability": total, "normalization_residual": abs(total - 1)})
    return report, EXIT_OK


def _pmap(func, items, jobs):
    if jobs <= 1:
        return [func(x) for x in items]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(func, items))


def _weight_chunk(args):
    from .spectral import ac_weight

    schur, theta, masses = args
    return ac_weight(schur, theta, masses, on_singular="nan")


def cmd_spectrum(cfg: RunConfig):
    from .spectral import SchurFunction, mass_at, midpoint_grid, SpectralMeasure

    coins = parse_coin(cfg.coin)
    params = Interleaved(coins) if cfg.measure == "walk" else coins
    schur = SchurFunction(params, depth=cfg.depth, tol=cfg.tol or 1e-15)
    masses, mass_rows, failed = [], [], False
    for t in cfg.candidates:
        try:
            m = mass_at(schur, t)
        except NumericalLimitError:
            mass_rows.append((t, float("nan"), "nonconvergent"))
            failed = True
            continue
        if m > 0:
            masses.append((t, m))
            mass_rows.append((t, m, "ok"))
    theta = midpoint_grid(cfg.grid)
    chunks = np.array_split(theta, max(1, cfg.jobs))
    w = np.concatenate(_pmap(_weight_chunk, [(schur, c, masses) for c in chunks], cfg.jobs))
    rows = []
    for t, v in zip(theta, w):
        ok = np.isfinite(v)
        failed |= not ok
        rows.append((float(t), float(v), "ok" if ok else "singular"))
    meta = _base_meta(cfg, coins)
    del meta["walk"], meta["n"], meta["alpha"], meta["beta"]
    meta["measure"] = cfg.measure
    meta["grid"] = cfg.grid
    try:
        measure = SpectralMeasure(theta, w, masses, lambda t: _weight_chunk((schur, t, masses)))
        total = measure.total_mass()
        meta["normalization_residual"] = abs(total - 1)
    except (NumericalLimitError, SingularEvaluationError):
        meta["normalization_residual"] = float("nan")
        failed = True
    report = Report(meta, [Table(["theta", "weight", "flag"], rows, "weight"),
                           Table(["theta", "mass", "flag"], mass_rows, "masses")])
    return report, (EXIT_NUMERIC if failed and cfg.strict else EXIT_OK)


def cmd_compare(cfg: RunConfig):
    from .experiments import compare_profiles

    coins = parse_coin(cfg.coin)
    if not isinstance(coins, (PowerLaw, Homogeneous)):
        raise ConfigError("compare needs a powerlaw or homogeneous coin")
    if isinstance(coins, Homogeneous) and coins.value == 0:
        raise ConfigError("compare needs a nonzero homogeneous parameter")
    if isinstance(coins, PowerLaw) and WalkKind.parse(cfg.walk) is WalkKind.D:
        raise ConfigError("no power-law limit law for the full-line walk")
    cmp = compare_profiles(coins, cfg.phi, cfg.n, cfg.J, cfg.walk)
    rows = [(r.region, r.j, r.simulated, r.predicted, r.residual) for r in cmp.rows]
    summary = {"max_residual": cmp.max_residual, "c0_partial": cmp.c0_partial,
               "c1_partial": cmp.c1_partial, "partial_sum": cmp.c0_partial + cmp.c1_partial}
    report = Report(_base_meta(cfg, coins) | {"J": cfg.J},
                    [Table(["region", "j", "simulated", "predicted", "residual"], rows)], summary)
    return report, EXIT_OK


def cmd_ldrate(cfg: RunConfig):
    from .experiments import ld_estimate, ld_precision
    from .limits import PowerLawModel

    coins = parse_coin(cfg.coin)
    if not isinstance(coins, PowerLaw):
        raise ConfigError("ldrate needs a powerlaw coin")
    if WalkKind.parse(cfg.walk) is not WalkKind.H1:
        raise ConfigError("ldrate applies to the h1 walk")
    model = PowerLawModel(coins.r)
    meta = _base_meta(cfg, coins)
    del meta["n"]
    if cfg.auto_ortho:
        phi = None
        v = model.orthogonal_state().vector
        meta["alpha"], meta["beta"] = v[0], v[1]
        meta["state"] = "auto-orthogonal (built in multiprecision)"
    else:
        phi = cfg.phi
        overlap = abs(phi[0] * model.l[0] + phi[1] * model.l[1])
        if overlap > 1e-12:
            raise ConfigError("ldrate needs a state orthogonal to l; pass --auto-ortho")
        meta["state"] = "user supplied (double precision; overlap floor ~1e-34 in probability)"
    if not cfg.ns or len(cfg.ns) < 2:
        raise ConfigError("ldrate needs at least two values of n")
    meta["accumulation"] = "log-domain"
    meta["precision_bits"] = [ld_precision(n, model.tau) for n in cfg.ns]
    fits = ld_estimate(coins.r, cfg.eps, cfg.ns, phi, jobs=cfg.jobs)
    samples = [(f.eps, n, lp, lp / n) for f in fits for n, lp in zip(f.ns, f.log_p)]
    fit_rows = [(f.eps, f.slope, f.theory, f.rel_error) for f in fits]
    report = Report(meta, [Table(["eps", "n", "log_p", "rate_n"], samples, "samples"),
                           Table(["eps", "fitted", "theory", "rel_error"], fit_rows, "fits")])
    return report, EXIT_OK


def run_checks(coins: CoinSequence) -> list[dict]:
    """The self-consistency suite behind ``verify``."""
    from .cmv import cmv_walk_correspondence
    from .genfun import doubling_check, series_coefficients
    from .limits import PowerLawModel, decomposition_terms
    from .spectral import SchurFunction, bridge_check, recover_measure
    from .walk import iter_passage_weights

    rng = np.random.default_rng(20240601)
    zs = 0.9 * np.sqrt(rng.uniform(0, 1, 20)) * np.exp(2j * np.pi * rng.uniform(0, 1, 20))
    checks = []

    def add(name, residual, threshold):
        checks.append({"name": name, "residual": float(residual), "threshold": threshold,
                       "pass": bool(np.isfinite(residual) and residual < threshold)})

    add("bridge_identity", max(bridge_check(coins, j, z) for z in zs for j in (-2, 0, 3)), 1e-10)
    add("doubling_relation", max(doubling_check(coins, j, z) for z in zs[:8] for j in (0, 1, 2)), 1e-10)
    add("cmv_correspondence", cmv_walk_correspondence(coins, 100, 50), 1e-12)
    N = 30
    worst = 0.0
    for kind in ("h1", "h2", "d"):
        hist = {n: (lo, xi) for n, lo, xi in iter_passage_weights(N, kind, coins)}
        js = range(0, N + 1) if kind != "d" else range(-N, N + 1)
        for j in js:
            ms = series_coefficients(j, kind, coins, N)
            for n in range(N + 1):
                lo, xi = hist[n]
                i = j - lo
                ref = xi[i] if 0 <= i < len(xi) else np.zeros((2, 2))
                worst = max(worst, float(np.abs(ms.coefficient(n) - ref).max()))
    add("series_vs_recursion", worst, 1e-10)
    f = SchurFunction(coins)
    add("schur_class_bound", max(0.0, float(np.max(np.abs(f(0.99 * zs / 0.9)))) - 1.0), 1e-12)
    if isinstance(coins, PowerLaw):
        model = PowerLawModel(coins.r)
        worst = 0.0
        for n, lo, xi in iter_passage_weights(100, "h1", coins):
            for j in range(n + 1):
                B, L, I = decomposition_terms(model, n, j)
                worst = max(worst, float(np.abs(B + L + I - xi[j]).max()))
        add("decomposition", worst, 1e-10)
        meas = recover_measure(SchurFunction(Interleaved(coins)))
        add("measure_normalization", abs(meas.total_mass() - 1), 1e-6)
        add("origin_mass", abs(meas.masses[0][1] - 1 / (2 * coins.r - 1)) if meas.masses else 1.0, 1e-4)
    return checks


def cmd_verify(cfg: RunConfig):
    coins = parse_coin(cfg.coin)
    checks = run_checks(coins)
    ok = all(c["pass"] for c in checks)
    if cfg.format == "json":
        doc = {"coin": cfg.coin, "checks": checks, "all_pass": ok}
        report = _JsonReport(json.dumps(doc, indent=2) + "\n")
    else:
        rows = [(c["name"], c["residual"], c["threshold"], "pass" if c["pass"] else "fail") for c in checks]
        report = Report({"command": "verify", "coin": cfg.coin}, [Table(["check", "residual", "threshold", "status"], rows)],
                        {"all_pass": ok})
    return report, (EXIT_OK if ok else EXIT_CHECK)


@dataclass
class _JsonReport:
    text: str

    def to_json(self) -> str:
        return self.text

    to_csv = to_json


HANDLERS = {"simulate": cmd_simulate, "spectrum": cmd_spectrum, "compare": cmd_compare,
            "ldrate": cmd_ldrate, "verify": cmd_verify}


def run(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    saved = os.environ.get("QWALK_DEPTH")
    if cfg.depth is not None:
        os.environ["QWALK_DEPTH"] = str(cfg.depth)
    try:
        report, code = HANDLERS[cfg.command](cfg)
    finally:
        if saved is None:
            os.environ.pop("QWALK_DEPTH", None)
        else:
            os.environ["QWALK_DEPTH"] = saved
    _emit(cfg, report, stdout)
    return code


def main(argv=None, stdout=None, stderr=None) -> int:
    stderr = stderr or sys.stderr
    try:
        cfg = config_from_args(argv)
        return run(cfg, stdout)
    except SystemExit as exc:  # argparse usage errors
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    except (ConfigError, PreconditionError, DomainError) as exc:
        print(f"qwalk: error: {exc}", file=stderr)
        return EXIT_CONFIG
    except (NumericalLimitError, SingularEvaluationError) as exc:
        print(f"qwalk: numerical failure: {exc}", file=stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
