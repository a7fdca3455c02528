import json
import subprocess
import sys

import pytest

from rosenau import cli
from rosenau.errors import DivergenceError

FAST = ["--preset", "rlw-p2", "--n", "128", "--stages", "2"]


def run(tmp_path, *args):
    return cli.main([*args, "--out", str(tmp_path)])


def read_csv(path):
    text = path.read_bytes().decode("utf-8")
    assert "\r" not in text
    lines = text.split("\n")
    assert lines[0] == "# schema=1" and lines[-1] == ""
    return lines[1].split(","), [ln.split(",") for ln in lines[2:-1]]


def test_fmt():
    assert cli.fmt(None) == "" and cli.fmt("a.csv") == "a.csv"
    assert cli.fmt(0.1) == "0.10000000000000001"
    assert cli.fmt(3) == "3"


def test_parse_number():
    assert cli.parse_number("1/8") == 0.125
    assert cli.parse_number(" 1e-3 ") == 1e-3
    with pytest.raises(Exception):
        cli.parse_number("one")


def test_converge_outputs(tmp_path):
    # default N = 512 keeps the spatial error below the temporal one
    assert run(tmp_path, "converge", "--preset", "rlw-p2", "--dt", "0.5", "--dt", "1", "--t-end", "2") == 0
    header, rows = read_csv(tmp_path / "convergence.csv")
    assert header == ["dt", "e2", "einf", "order2", "orderinf"]
    assert [r[0] for r in rows] == ["1", "0.5"]
    assert rows[0][3] == "" and float(rows[1][3]) > 3
    assert "mean_order2=" in (tmp_path / "summary.txt").read_text()


def test_converge_parallel_matches_serial(tmp_path):
    args = ("converge", *FAST, "--dt", "1", "--dt", "1/2", "--t-end", "1")
    assert cli.main([*args, "--out", str(tmp_path / "a")]) == 0
    assert cli.main([*args, "--jobs", "2", "--out", str(tmp_path / "b")]) == 0
    assert (tmp_path / "a/convergence.csv").read_bytes() == (tmp_path / "b/convergence.csv").read_bytes()


@pytest.mark.parametrize("scheme", ["mp", "ep"])
def test_evolve_deterministic(tmp_path, scheme):
    args = ("evolve", *FAST, "--scheme", scheme, "--dt", "0.25", "--t-end", "1", "--record-every", "2")
    assert cli.main([*args, "--out", str(tmp_path / "a")]) == 0
    assert cli.main([*args, "--out", str(tmp_path / "b")]) == 0
    for name in ("invariants.csv", "final_profile.csv", "errors.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    header, rows = read_csv(tmp_path / "a/invariants.csv")
    assert header[:4] == ["t", "mass", "momentum", "hamiltonian"]
    assert [float(r[0]) for r in rows] == [0, 0.5, 1.0]
    assert (rows[0][4] == "") == (scheme == "mp")
    _, prof = read_csv(tmp_path / "a/final_profile.csv")
    assert len(prof) == 128


def test_evolve_zero_span_header_only(tmp_path):
    assert run(tmp_path, "evolve", *FAST, "--dt", "0.1", "--t-end", "0") == 0
    for name in ("invariants.csv", "final_profile.csv"):
        header, rows = read_csv(tmp_path / name)
        assert header and rows == []


def test_config_json_and_flag_override(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"preset": "rlw-p3", "n_modes": 64, "dt": ["1/4"], "t_end": 0.5, "scheme": "ep",
                               "solver": {"tol": 1e-13}}))
    args = cli.make_parser().parse_args(["evolve", "--config", str(cfg), "--scheme", "mp", "--strict"])
    rc = cli.build_config(args)
    assert (rc.preset, rc.n, rc.dt, rc.t_end, rc.scheme) == ("rlw-p3", 64, [0.25], 0.5, "mp")
    assert rc.solver.tol == 1e-13 and rc.solver.on_nonconvergence == "error"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": "red"}))
    assert run(tmp_path, "evolve", "--config", str(bad)) == 2


@pytest.mark.parametrize("extra", [
    ["converge", "--preset", "gaussian-rlw", "--dt", "0.1"],
    ["converge", *FAST],
    ["evolve", *FAST, "--dt", "0.3", "--t-end", "1"],
    ["evolve", *FAST, "--dt", "0.1", "--dt", "0.2"],
    ["evolve", *FAST, "--stages", "11", "--dt", "0.1"],
    ["evolve", *FAST, "--dt", "-0.1"],
    ["evolve", *FAST, "--p", "3", "--dt", "0.1"],
    ["evolve", "--preset", "gaussian-rlw", "--p", "4", "--scheme", "ep", "--dt", "0.1"],
    ["profile", *FAST, "--dt", "0.1"],
    ["evolve", "--config", "/nonexistent/x.json"],
])
def test_usage_errors(tmp_path, extra):
    assert run(tmp_path, *extra) == 2


def test_argparse_usage_error_exit_code(tmp_path):
    with pytest.raises(SystemExit) as info:
        cli.main(["evolve", "--scheme", "rk4"])
    assert info.value.code == 2


def test_strict_nonconvergence_exit(tmp_path):
    assert run(tmp_path, "evolve", *FAST, "--dt", "0.5", "--t-end", "1", "--max-iters", "1", "--strict") == 4
    assert run(tmp_path, "evolve", *FAST, "--dt", "0.5", "--t-end", "1", "--max-iters", "1") == 0


def test_divergence_exit(tmp_path, monkeypatch):
    def boom(*a, **k):
        raise DivergenceError("non-finite", iters=3)

    monkeypatch.setattr(cli, "evolve", boom)
    assert run(tmp_path, "evolve", *FAST, "--dt", "0.5", "--t-end", "1") == 3


def test_profile_manifest(tmp_path, caplog):
    rc = run(tmp_path, "profile", *FAST, "--dt", "0.25", "--times", "0", "--times", "0.5",
             "--times", "0.5", "--times", "0.6")
    assert rc == 0
    assert "duplicate" in caplog.text and "snapped" in caplog.text
    header, rows = read_csv(tmp_path / "profiles.csv")
    assert header == ["requested_t", "actual_t", "offset", "file"]
    assert [r[3] for r in rows] == ["profile_000.csv", "profile_001.csv", "profile_002.csv"]
    assert float(rows[2][1]) == 0.5 and float(rows[2][2]) == pytest.approx(-0.1)
    # the t = 0 snapshot echoes the initial data exactly
    from rosenau.problems import preset
    from rosenau.spectral import build_grid

    grid = build_grid(128, *preset("rlw-p2").domain)
    _, prof = read_csv(tmp_path / "profile_000.csv")
    assert [float(r[1]) for r in prof] == list(preset("rlw-p2").initial(grid.nodes))


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "rosenau", "evolve", *FAST, "--dt", "0.5", "--t-end", "0.5",
                           "--out", str(tmp_path)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert "mass_drift" in proc.stdout


@pytest.mark.slow
def test_gaussian_profiles_regression(tmp_path):
    import numpy as np
    from pathlib import Path

    fixtures = Path(__file__).parent / "fixtures"
    finals = {}
    for p in (2, 5):
        out = tmp_path / f"p{p}"
        assert cli.main(["profile", "--preset", "gaussian-rlw", "--p", str(p), "--scheme", "ep",
                         "--dt", "0.1", "--times", "100", "--out", str(out)]) == 0
        got = np.loadtxt(out / "profile_000.csv", delimiter=",", skiprows=2)[::50]
        ref = np.loadtxt(fixtures / f"gaussian_ep_p{p}_t100.csv", delimiter=",", skiprows=3)
        np.testing.assert_array_equal(got[:, 0], ref[:, 0])
        np.testing.assert_allclose(got[:, 1], ref[:, 1], atol=1e-10)
        finals[p] = got[:, 1]
    # the dispersive tails depend on the exponent
    assert np.abs(finals[2] - finals[5]).max() > 0.1
