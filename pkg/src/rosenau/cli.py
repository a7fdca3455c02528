"""Batch command-line harness: convergence studies, invariant runs, profile snapshots.

    python -m rosenau converge --preset kdv-case1 --scheme ep --n 1024 \\
        --dt 1/10 --dt 1/20 --dt 1/40 --dt 1/80 --t-end 1 --out runs/table2

Exit codes: 0 success, 2 usage/config error, 3 solver divergence,
4 non-convergence in strict mode.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from fractions import Fraction
from pathlib import Path

import numpy as np

from .diagnostics import ConvergenceRow, error_norms, estimate_order, mean_order
from .dynamics import QAV_EXPONENTS
from .errors import ConfigurationError, DivergenceError, NonConvergenceError, RosenauError
from .integrator import ENERGY, ERROR, WARN, SolverOptions, evolve, scheme_name, step_count
from .problems import PRESETS, preset
from .spectral import build_grid
from .tableau import MAX_STAGES, gauss_legendre

log = logging.getLogger("rosenau")

SCHEMA_LINE = "# schema=1"
EXIT_OK, EXIT_USAGE, EXIT_DIVERGED, EXIT_NONCONVERGED = 0, 2, 3, 4

CONVERGE_COLUMNS = ("dt", "e2", "einf", "order2", "orderinf")
INVARIANT_COLUMNS = ("t", "mass", "momentum", "hamiltonian", "quad_energy", "qav_defect", "iters", "residual")
PROFILE_COLUMNS = ("x", "u")


@dataclass
class RunConfig:
    preset: str = "rlw-p2"
    scheme: str = "mp"
    stages: int = 2
    n_modes: int | None = None  # preset default when absent
    dt: list[float] = field(default_factory=list)
    t_end: float = 1.0
    record_every: int = 1
    solver: SolverOptions = field(default_factory=SolverOptions)
    output_dir: str = "out"
    p: int | None = None  # exponent override for presets without an exact solution
    times: list[float] = field(default_factory=list)
    jobs: int = 1

    def validate(self) -> None:
        found = preset(self.preset, self.p)
        scheme_name(self.scheme)
        if not 1 <= self.stages <= MAX_STAGES:
            raise ConfigurationError(f"stages must be in 1..{MAX_STAGES}, got {self.stages}")
        if scheme_name(self.scheme) == ENERGY and found.params.p not in QAV_EXPONENTS:
            raise ConfigurationError(f"scheme ep needs p in {QAV_EXPONENTS}, preset has p={found.params.p}")
        if self.t_end < 0:
            raise ConfigurationError(f"t_end must be >= 0, got {self.t_end}")
        if self.record_every < 1:
            raise ConfigurationError(f"record_every must be >= 1, got {self.record_every}")
        if self.jobs < 1:
            raise ConfigurationError(f"jobs must be >= 1, got {self.jobs}")
        if any(not d > 0 for d in self.dt):
            raise ConfigurationError(f"time steps must be positive, got {self.dt}")

    @property
    def problem(self):
        return preset(self.preset, self.p)

    @property
    def n(self) -> int:
        return self.n_modes if self.n_modes is not None else self.problem.default_n


def parse_number(text) -> float:
    """Accept 0.125, 1/8 or 1e-3."""
    if isinstance(text, (int, float)):
        return float(text)
    try:
        return float(Fraction(str(text).strip()))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def config_from_json(path: str | Path) -> dict:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from None
    known = {f.name for f in fields(RunConfig)}
    unknown = set(raw) - known
    if unknown:
        raise ConfigurationError(f"unknown config field(s): {sorted(unknown)}")
    if "solver" in raw:
        raw["solver"] = dict(raw["solver"])
    for key in ("dt", "times"):
        if key in raw:
            vals = raw[key] if isinstance(raw[key], list) else [raw[key]]
            raw[key] = [parse_number(v) for v in vals]
    return raw


def build_config(args: argparse.Namespace) -> RunConfig:
    values = config_from_json(args.config) if args.config else {}
    solver = dict(values.pop("solver", {}) or {})
    flag_map = {
        "preset": args.preset,
        "scheme": args.scheme,
        "stages": args.stages,
        "n_modes": args.n,
        "dt": args.dt,
        "t_end": args.t_end,
        "record_every": args.record_every,
        "output_dir": args.out,
        "p": args.p,
        "times": getattr(args, "times", None),
        "jobs": args.jobs,
    }
    values.update({k: v for k, v in flag_map.items() if v is not None})
    if args.tol is not None:
        solver["tol"] = args.tol
    if args.max_iters is not None:
        solver["max_iters"] = args.max_iters
    if args.strict:
        solver["on_nonconvergence"] = ERROR
    solver.setdefault("on_nonconvergence", WARN)
    cfg = RunConfig(**values, solver=SolverOptions(**solver))
    cfg.validate()
    return cfg


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def write_csv(path: Path, columns, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(SCHEMA_LINE + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def _setup(cfg: RunConfig):
    problem = cfg.problem
    grid = build_grid(cfg.n, *problem.domain)
    return problem, grid, gauss_legendre(cfg.stages)


def _run_one(cfg: RunConfig, dt: float):
    problem, grid, tableau = _setup(cfg)
    t0 = time.perf_counter()
    result = evolve(grid, problem.params, tableau, cfg.scheme, problem.initial(grid.nodes), dt, cfg.t_end,
                    opts=cfg.solver, record_every=10**9)
    wall = time.perf_counter() - t0
    u = result.final.u if scheme_name(cfg.scheme) == ENERGY else result.final
    e2, einf = error_norms(grid, u, problem.exact, result.time)
    iters = [r.iters for r in result.reports]
    return ConvergenceRow(dt, e2, einf), wall, iters, sum(not r.converged for r in result.reports)


def cmd_converge(cfg: RunConfig) -> int:
    if cfg.problem.exact is None:
        raise ConfigurationError(f"preset {cfg.preset!r} has no exact solution; converge needs one")
    if not cfg.dt:
        raise ConfigurationError("converge needs at least one --dt")
    dts = sorted(set(cfg.dt), reverse=True)
    for dt in dts:
        step_count(dt, cfg.t_end)
    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(lambda d: _run_one(cfg, d), dts))
    else:
        results = [_run_one(cfg, d) for d in dts]
    rows = estimate_order([r[0] for r in results])
    out = Path(cfg.output_dir)
    write_csv(out / "convergence.csv", CONVERGE_COLUMNS,
              [(r.dt, r.e2, r.einf, r.order2, r.orderinf) for r in rows])
    m2, minf = mean_order(rows, "order2"), mean_order(rows, "orderinf")
    lines = [f"preset={cfg.preset} scheme={cfg.scheme} stages={cfg.stages} n={cfg.n} t_end={fmt(cfg.t_end)}"]
    for row, (_, wall, iters, misses) in zip(rows, results):
        lines.append(
            f"dt={fmt(row.dt)} e2={row.e2:.4e} einf={row.einf:.4e} wall={wall:.3f}s "
            f"iters_mean={np.mean(iters) if iters else 0:.2f} iters_max={max(iters, default=0)} unconverged={misses}"
        )
    summary = f"mean_order2={fmt(m2)} mean_orderinf={fmt(minf)} wall_total={sum(r[1] for r in results):.3f}s"
    lines.append(summary)
    (out / "summary.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(summary)
    return EXIT_OK


def _invariant_row(t, rec, report):
    iters = report.iters if report is not None else 0
    resid = report.final_residual if report is not None else 0.0
    return (t, rec.mass, rec.momentum, rec.hamiltonian, rec.quad_energy, rec.qav_defect, iters, resid)


def _single_dt(cfg: RunConfig) -> float:
    if len(cfg.dt) != 1:
        raise ConfigurationError(f"this command takes exactly one --dt, got {cfg.dt}")
    return cfg.dt[0]


def cmd_evolve(cfg: RunConfig) -> int:
    problem, grid, tableau = _setup(cfg)
    dt = _single_dt(cfg)
    rows = []
    out = Path(cfg.output_dir)
    result = evolve(grid, problem.params, tableau, cfg.scheme, problem.initial(grid.nodes), dt, cfg.t_end,
                    observer=lambda t, state, rec, rep: rows.append(_invariant_row(t, rec, rep)),
                    opts=cfg.solver, record_every=cfg.record_every)
    if cfg.t_end == 0:
        write_csv(out / "invariants.csv", INVARIANT_COLUMNS, [])
        write_csv(out / "final_profile.csv", PROFILE_COLUMNS, [])
        return EXIT_OK
    write_csv(out / "invariants.csv", INVARIANT_COLUMNS, rows)
    u = result.final.u if scheme_name(cfg.scheme) == ENERGY else result.final
    write_csv(out / "final_profile.csv", PROFILE_COLUMNS, zip(grid.nodes, u))
    recs = result.records
    lines = [f"preset={cfg.preset} scheme={cfg.scheme} stages={cfg.stages} n={cfg.n} dt={fmt(dt)} t_end={fmt(cfg.t_end)}"]
    for name in ("mass", "momentum", "hamiltonian", "quad_energy"):
        if getattr(recs[0], name) is not None:
            lines.append(f"{name}_drift={max(abs(getattr(r, name) - getattr(recs[0], name)) for r in recs):.3e}")
    if problem.exact is not None:
        e2, einf = error_norms(grid, u, problem.exact, result.time)
        write_csv(out / "errors.csv", ("t", "e2", "einf"), [(result.time, e2, einf)])
        lines.append(f"e2={e2:.4e} einf={einf:.4e}")
    lines.append(f"iters_max={max((r.iters for r in result.reports), default=0)} "
                 f"unconverged={sum(not r.converged for r in result.reports)}")
    (out / "summary.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(" ".join(lines[1:]))
    return EXIT_OK


def cmd_profile(cfg: RunConfig) -> int:
    problem, grid, tableau = _setup(cfg)
    dt = _single_dt(cfg)
    requested = []
    for t in cfg.times:
        if t < 0:
            raise ConfigurationError(f"profile times must be >= 0, got {t}")
        if t in requested:
            log.warning("duplicate profile time %s ignored", fmt(t))
            continue
        requested.append(t)
    if not requested:
        raise ConfigurationError("profile needs at least one --times value")
    steps = {}
    for t in requested:
        n = int(round(t / dt))
        if abs(n * dt - t) > 1e-9 * max(1.0, t):
            log.warning("time %s is not a multiple of dt=%s; snapped to %s", fmt(t), fmt(dt), fmt(n * dt))
        steps[t] = n
    wanted = set(steps.values())
    snaps = {}

    def observer(t, state, rec, rep):
        n = int(round((t - 0.0) / dt))
        if n in wanted:
            snaps[n] = np.array(state.u if hasattr(state, "u") else state)

    evolve(grid, problem.params, tableau, cfg.scheme, problem.initial(grid.nodes), dt,
           max(wanted) * dt, observer=observer, opts=cfg.solver, record_every=1)
    out = Path(cfg.output_dir)
    manifest = []
    for i, t in enumerate(requested):
        n = steps[t]
        name = f"profile_{i:03d}.csv"
        write_csv(out / name, PROFILE_COLUMNS, zip(grid.nodes, snaps[n]))
        manifest.append((t, n * dt, n * dt - t, name))
    write_csv(out / "profiles.csv", ("requested_t", "actual_t", "offset", "file"), manifest)
    return EXIT_OK


COMMANDS = {"converge": cmd_converge, "evolve": cmd_evolve, "profile": cmd_profile}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON run manifest; flags override its fields")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--scheme", choices=("mp", "ep"))
    p.add_argument("--stages", type=int, help="Gauss stages s (order 2s)")
    p.add_argument("--n", type=int, help="number of Fourier nodes N")
    p.add_argument("--dt", type=parse_number, action="append", help="time step (repeatable)")
    p.add_argument("--t-end", type=parse_number)
    p.add_argument("--record-every", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--max-iters", type=int)
    p.add_argument("--strict", action="store_true", help="fail on non-converged stage iterations")
    p.add_argument("--out", help="output directory")
    p.add_argument("--p", type=int, help="exponent override (gaussian-rlw only)")
    p.add_argument("--jobs", type=int, help="parallel dt cases for converge")
    p.add_argument("-v", "--verbose", action="store_true")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rosenau", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        _common(p)
        if name == "profile":
            p.add_argument("--times", type=parse_number, action="append", help="snapshot time (repeatable)")
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = build_config(args)
        return COMMANDS[args.command](cfg)
    except DivergenceError as exc:
        print(f"error: solver diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except NonConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    except (RosenauError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
