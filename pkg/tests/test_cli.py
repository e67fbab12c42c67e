import io
import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qwalk import NumericalLimitError
from qwalk import cli
from qwalk.cli import RunConfig, config_from_args, main, parse_coin, parse_complex


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def csv_rows(text):
    lines = [l for l in text.splitlines() if l and not l.startswith("#")]
    return lines[0].split(","), [l.split(",") for l in lines[1:]]


def meta(text):
    return dict(l[2:].split("=", 1) for l in text.splitlines() if l.startswith("# "))


finite = st.floats(-5, 5, allow_nan=False)
configs = st.builds(
    RunConfig,
    command=st.sampled_from(cli.COMMANDS), walk=st.sampled_from(["h1", "h2", "d"]),
    coin=st.sampled_from(["powerlaw:3", "zero", "homogeneous:0.5,0.1"]), n=st.integers(0, 5000),
    alpha=st.builds(complex, finite, finite), beta=st.builds(complex, finite, finite),
    format=st.sampled_from(["csv", "json"]), output=st.none() | st.just("out.csv"),
    tol=st.none() | st.floats(1e-16, 1e-3), depth=st.none() | st.integers(1, 1000), J=st.integers(0, 100),
    eps=st.lists(st.floats(0, 0.99), min_size=1, max_size=4).map(tuple),
    ns=st.lists(st.integers(1, 3000), min_size=2, max_size=4).map(tuple), grid=st.integers(1, 1024),
    candidates=st.lists(st.floats(0, 6.28), max_size=3).map(tuple), measure=st.sampled_from(["walk", "cmv"]),
    auto_ortho=st.booleans(), strict=st.booleans(), jobs=st.integers(1, 8), all_sites=st.booleans(),
)


@given(configs)
def test_config_round_trip(cfg):
    assert RunConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg
    ns = cli.build_parser().parse_args(cfg.to_argv())
    assert ns.command == cfg.command
    back = RunConfig(
        command=ns.command, walk=ns.walk, coin=ns.coin, n=ns.n, alpha=parse_complex(ns.alpha),
        beta=parse_complex(ns.beta), format=ns.format, output=ns.output, tol=ns.tol, depth=ns.depth, J=ns.J,
        eps=tuple(cli._float_list(ns.eps)), ns=tuple(cli._int_list(ns.ns)), grid=ns.grid,
        candidates=tuple(cli._float_list(ns.candidates)), measure=ns.measure, auto_ortho=ns.auto_ortho,
        strict=ns.strict, jobs=ns.jobs, all_sites=ns.all_sites)
    assert back == cfg


def test_parse_helpers():
    assert parse_complex("0.5,-1") == 0.5 - 1j
    assert parse_complex("1+2j") == 1 + 2j
    assert parse_coin("powerlaw:2.5").r == 2.5
    with pytest.raises(cli.ConfigError):
        parse_coin("powerlaw:0.5")
    with pytest.raises(cli.ConfigError):
        parse_complex("abc")


def test_h2_beta_rejected_before_compute(monkeypatch):
    monkeypatch.setattr(cli, "cmd_simulate", lambda cfg: pytest.fail("should not run"))
    code, _, err = run(["simulate", "--walk", "h2", "--beta", "0.5"])
    assert code == 2 and "beta" in err


def test_simulate_transport():
    code, out, _ = run(["simulate", "--walk", "d", "--coin", "zero", "--n", "5", "--alpha", "0", "--beta", "1"])
    assert code == 0
    cols, rows = csv_rows(out)
    assert cols == ["j", "prob", "dual_j", "dual_prob"]
    assert rows == [["5", "1.0", "0", "1.0"]]
    m = meta(out)
    assert m["walk"] == "d" and m["coin"] == "zero" and m["n"] == "5" and m["beta_re"] == "1.0"


def test_simulate_fig1_two_peaks():
    code, out, _ = run(["simulate", "--walk", "h1", "--coin", "powerlaw:3", "--n", "200",
                        "--alpha", "0.7071", "--beta", "0.7071"])
    assert code == 0
    _, rows = csv_rows(out)
    p = np.array([float(r[1]) for r in rows])
    j = np.array([int(r[0]) for r in rows])
    assert abs(float(meta(out)["normalization_residual"])) < 1e-12
    assert p[j == 0][0] > 10 * p[j == 100][0] and p[j == 199][0] > 10 * p[j == 100][0]
    assert np.argmax(p[j < 100]) == 0 and j[np.argmax(p)] >= 198


def test_determinism_and_json():
    argv = ["simulate", "--n", "30", "--alpha", "0.6", "--beta", "0,0.8", "--format", "json"]
    a, b = run(argv), run(argv)
    assert a == b
    doc = json.loads(a[1])
    assert doc["metadata"]["beta"] == {"re": 0.0, "im": 0.8}
    assert sum(r["prob"] for r in doc["rows"]) == pytest.approx(1, abs=1e-12)


def test_output_file(tmp_path):
    path = tmp_path / "dist.csv"
    code, out, _ = run(["simulate", "--n", "4", "--output", str(path)])
    assert code == 0 and out == "" and path.read_text().startswith("# command=simulate")
    code, _, err = run(["simulate", "--n", "4", "--output", str(tmp_path / "missing" / "x.csv")])
    assert code != 0 and "cannot write" in err


def test_spectrum_power_law():
    code, out, _ = run(["spectrum", "--coin", "powerlaw:3", "--grid", "32"])
    assert code == 0
    assert float(meta(out)["normalization_residual"]) < 1e-6
    masses = out.split("# section=masses\n")[1].splitlines()
    assert masses[0] == "theta,mass,flag"
    t, m, flag = masses[1].split(",")
    assert float(t) == 0 and abs(float(m) - 0.2) < 1e-4 and flag == "ok"


def test_spectrum_zero_coins():
    code, out, _ = run(["spectrum", "--coin", "zero", "--grid", "16", "--format", "json"])
    doc = json.loads(out)
    assert code == 0 and doc["masses"] == []
    assert all(r["weight"] == pytest.approx(1) for r in doc["weight"])


def test_spectrum_jobs_identical():
    a = run(["spectrum", "--grid", "24"])
    b = run(["spectrum", "--grid", "24", "--jobs", "3"])
    assert a == b


def test_spectrum_strict_mode(monkeypatch):
    import qwalk.spectral

    def boom(*args, **kw):
        raise NumericalLimitError("no limit")

    monkeypatch.setattr(qwalk.spectral, "mass_at", boom)
    code, out, _ = run(["spectrum", "--grid", "8"])
    assert code == 0 and "nonconvergent" in out
    code, _, _ = run(["spectrum", "--grid", "8", "--strict"])
    assert code == 3


def test_compare_report():
    code, out, _ = run(["compare", "--coin", "powerlaw:3", "--n", "1000", "--J", "3"])
    assert code == 0
    cols, rows = csv_rows(out)
    assert cols == ["region", "j", "simulated", "predicted", "residual"]
    bottom = [r for r in rows if r[0] == "bottom"]
    assert float(bottom[0][4]) < 1e-3 and float(bottom[1][4]) < 1e-3
    m = meta(out)
    assert {"max_residual", "c0_partial", "c1_partial"} <= m.keys()


def test_compare_unsupported_coin():
    assert run(["compare", "--coin", "zero"])[0] == 2


def test_ldrate_requires_orthogonal_state():
    code, _, err = run(["ldrate", "--alpha", "1", "--beta", "0"])
    assert code == 2 and "auto-ortho" in err


def test_ldrate_report():
    code, out, _ = run(["ldrate", "--auto-ortho", "--eps", "0,0.25,0.5", "--ns", "200,400,800"])
    assert code == 0
    fits = out.split("# section=fits\n")[1].splitlines()[1:]
    slopes = {float(e): float(s) for e, s, _, _ in (l.split(",") for l in fits)}
    assert abs(slopes[0.0]) < 1e-3
    assert slopes[0.5] < slopes[0.25] < slopes[0.0]
    assert abs(slopes[0.5] / (0.5 * np.log(4 / 9)) - 1) < 0.05
    assert meta(out)["accumulation"] == "log-domain"


def test_verify_default():
    code, out, _ = run(["verify", "--format", "json"])
    doc = json.loads(out)
    assert code == 0 and doc["all_pass"]
    assert len(doc["checks"]) >= 4
    assert all({"name", "residual", "threshold", "pass"} <= c.keys() for c in doc["checks"])


def test_verify_failing_check(monkeypatch):
    monkeypatch.setattr(cli, "run_checks", lambda coins: [{"name": "x", "residual": 1.0, "threshold": 0.1,
                                                            "pass": False}])
    assert run(["verify"])[0] == 1


def test_verify_bad_coin_file(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("0.2 0.1\n1.0 0.0\n")
    code, _, err = run(["verify", "--coin", f"file:{bad}"])
    assert code == 2 and "bad.txt:2" in err


def test_file_coin_format(tmp_path):
    f = tmp_path / "coins.txt"
    f.write_text("0.3 0.1\n\n-0.2\n")
    seq = parse_coin(f"file:{f}")
    assert seq.values == (0.3 + 0.1j, -0.2 + 0j)


def test_depth_option_scoped_to_run(monkeypatch):
    import os

    seen = {}

    def fake(cfg):
        seen["depth"] = os.environ.get("QWALK_DEPTH")
        return cli.Report({}, []), 0

    monkeypatch.delenv("QWALK_DEPTH", raising=False)
    monkeypatch.setitem(cli.HANDLERS, "simulate", fake)
    cli.run(config_from_args(["simulate", "--n", "2", "--depth", "40"]), io.StringIO())
    assert seen["depth"] == "40" and "QWALK_DEPTH" not in os.environ


def test_usage_errors():
    assert run(["nonsense"])[0] == 2
    assert run(["simulate", "--walk", "x"])[0] == 2
    assert run(["simulate", "--alpha", "0", "--beta", "0"])[0] == 2
