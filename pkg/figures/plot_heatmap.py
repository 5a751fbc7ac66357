#!/usr/bin/env python3
"""Occupations and decay-rate panels over a drive sweep (Liouvillian data).

Input: liouvillian sweep CSV; output image path.
"""

import argparse

import numpy as np

import figstyle
from figstyle import column, read_csv, require_columns


def render(sweep_csv, out):
    figstyle.apply_style()
    import matplotlib.pyplot as plt

    meta, cols, rows = read_csv(sweep_csv)
    require_columns(cols, ["sweep_value", "gamma_ad", "p_b", "p_d",
                           "amplitude"], sweep_csv)
    v = np.array(column(rows, "sweep_value"))
    fig, axes = plt.subplots(3, 1, sharex=True, figsize=(5.5, 6.0))
    axes[0].plot(v, column(rows, "p_b"), color=figstyle.COLORS["bright"],
                 label="p_b")
    axes[0].plot(v, column(rows, "p_d"), color=figstyle.COLORS["dim"],
                 label="p_d")
    axes[0].set_ylabel("occupation")
    axes[0].legend()
    axes[1].semilogy(v, column(rows, "gamma_ad"),
                     color=figstyle.COLORS["gamma"])
    axes[1].set_ylabel("gamma_ad [kappa]")
    axes[2].plot(v, column(rows, "amplitude"),
                 color=figstyle.COLORS["amplitude"])
    axes[2].set_ylabel("|<a>|")
    axes[2].set_xlabel("sweep value")
    fig.tight_layout()
    return figstyle.save(fig, out)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sweep", required=True)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()
    print(render(args.sweep, args.out))


if __name__ == "__main__":
    main()
