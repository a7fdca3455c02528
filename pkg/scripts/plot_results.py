"""Plot the CSVs written by long_run.py and by the profile command.

Needs matplotlib, which the package itself does not depend on.

    python3 scripts/plot_results.py results/long_run results/plots
"""

import sys
from pathlib import Path

import numpy as np


def load(path):
    with open(path, encoding="utf-8") as fh:
        fh.readline()  # schema line
        names = fh.readline().strip().split(",")
        data = np.genfromtxt(fh, delimiter=",")
    return names, np.atleast_2d(data)


def main(src="results/long_run", dst="results/plots"):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    src, dst = Path(src), Path(dst)
    dst.mkdir(parents=True, exist_ok=True)
    for run in sorted(p for p in src.iterdir() if p.is_dir()):
        names, data = load(run / "invariants.csv")
        fig, (ax_inv, ax_u) = plt.subplots(1, 2, figsize=(10, 3.5))
        for name in ("mass", "momentum", "hamiltonian", "quad_energy"):
            col = data[:, names.index(name)]
            if not np.all(np.isnan(col)):
                ax_inv.semilogy(data[:, 0], np.abs(col - col[0]) + 1e-18, label=name)
        ax_inv.set_xlabel("t")
        ax_inv.set_ylabel("|X(t) - X(0)|")
        ax_inv.legend(fontsize=8)
        _, prof = load(run / "final_profile.csv")
        ax_u.plot(prof[:, 0], prof[:, 1], lw=0.8)
        ax_u.set_xlabel("x")
        ax_u.set_title(run.name)
        fig.tight_layout()
        fig.savefig(dst / f"{run.name}.png", dpi=120)
        plt.close(fig)
        print(dst / f"{run.name}.png")


if __name__ == "__main__":
    main(*sys.argv[1:])
