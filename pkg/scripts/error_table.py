"""Fourth-order error table for kdv-case1 (N=1024, t=1), both schemes.

    python3 scripts/error_table.py [--out results/error_table]
"""

import argparse
from pathlib import Path

from rosenau.cli import CONVERGE_COLUMNS, write_csv
from rosenau.diagnostics import ConvergenceRow, error_norms, estimate_order
from rosenau.integrator import evolve
from rosenau.problems import preset
from rosenau.spectral import build_grid
from rosenau.tableau import gauss_legendre


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results/error_table")
    args = ap.parse_args()
    pr = preset("kdv-case1")
    grid = build_grid(1024, *pr.domain)
    tab = gauss_legendre(2)
    for scheme in ("ep", "mp"):
        rows = []
        for dt in (1 / 10, 1 / 20, 1 / 40, 1 / 80):
            res = evolve(grid, pr.params, tab, scheme, pr.initial(grid.nodes), dt, 1.0, record_every=10**9)
            u = res.final.u if scheme == "ep" else res.final
            rows.append(ConvergenceRow(dt, *error_norms(grid, u, pr.exact, res.time)))
        rows = estimate_order(rows)
        write_csv(Path(args.out) / f"{scheme}.csv", CONVERGE_COLUMNS,
                  [(r.dt, r.e2, r.einf, r.order2, r.orderinf) for r in rows])
        print(scheme)
        for r in rows:
            order = "" if r.order2 is None else f"{r.order2:.3f}"
            print(f"  dt={r.dt:<8.4g} e2={r.e2:.4e} einf={r.einf:.4e} order={order}")


if __name__ == "__main__":
    main()
