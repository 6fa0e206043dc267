"""Deviation ||beta| - |beta_inf|| versus N at Delta = 0, g = 2.5 gamma.

Writes a CSV next to the working directory (or to --out) and prints a short
table; plotting is left to whatever tool reads the CSV.
"""

import argparse

import numpy as np

from defbec import ModelParams, deviation_curve


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--g", type=float, default=2.5)
    ap.add_argument("--n-min", type=float, default=10)
    ap.add_argument("--n-max", type=float, default=1e4)
    ap.add_argument("--points", type=int, default=80)
    ap.add_argument("--out", default="fig1_deviation.csv")
    args = ap.parse_args()

    ns = np.geomspace(args.n_min, args.n_max, args.points)
    rows = deviation_curve(ModelParams(delta=0.0, g=args.g), ns)
    with open(args.out, "w") as fh:
        fh.write("N,deviation\n")
        for r in rows:
            fh.write(f"{r.n_atoms:.8e},{r.deviation:.8e}\n")
    for r in rows[:: max(1, len(rows) // 8)]:
        print(f"N={r.n_atoms:10.1f}  deviation={r.deviation:.6f}")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
