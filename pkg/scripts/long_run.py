"""Long-time invariant drift for the Gaussian pulse (h = dt = 0.1).

Writes one invariants CSV per (p, scheme) through the CLI.  The default
horizon is t=100; --t-end 1000 matches the longer run at ten times the cost.
"""

import argparse
import sys

from rosenau import cli


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--t-end", default="100")
    ap.add_argument("--stages", default="2")
    ap.add_argument("--out", default="results/long_run")
    args = ap.parse_args()
    status = 0
    for p in ("2", "3", "5"):
        for scheme in ("mp", "ep"):
            print(f"p={p} {scheme}: ", end="", flush=True)
            status |= cli.main(["evolve", "--preset", "gaussian-rlw", "--p", p, "--scheme", scheme,
                                "--stages", args.stages, "--dt", "0.1", "--t-end", args.t_end,
                                "--record-every", "10", "--out", f"{args.out}/p{p}_{scheme}"])
    sys.exit(status)


if __name__ == "__main__":
    main()
