#!/usr/bin/env python3
"""Barrier magnitudes |R| along a damping sweep.

Input: barrier CSV (sweep_value, absR_bd, absR_db, lam); output image path.
"""

import argparse

import numpy as np

import figstyle
from figstyle import column, read_csv, require_columns


def render(barrier_csv, out):
    figstyle.apply_style()
    import matplotlib.pyplot as plt

    meta, cols, rows = read_csv(barrier_csv)
    require_columns(cols, ["sweep_value", "absR_bd", "absR_db", "lam"],
                    barrier_csv)
    v = np.array(column(rows, "sweep_value"))
    lam = column(rows, "lam")[0]
    fig, ax = plt.subplots(figsize=(5.5, 4.0))
    ax.plot(v, column(rows, "absR_bd"), "o-", color=figstyle.COLORS["bright"],
            label="|R| bright->unstable")
    ax.plot(v, column(rows, "absR_db"), "s-", color=figstyle.COLORS["dim"],
            label="|R| dim->unstable")
    ax.axhline(lam, color="gray", lw=0.6, ls=":", label="lambda")
    ax.set_xlabel("kappa")
    ax.set_ylabel("barrier magnitude |R|")
    ax.legend()
    fig.tight_layout()
    return figstyle.save(fig, out)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--barrier", required=True)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()
    print(render(args.barrier, args.out))


if __name__ == "__main__":
    main()
