#!/usr/bin/env python3
"""Switching rates from both pipelines against the sweep value, with the
cavity amplitude overlaid (log-scale rate axis).

Input: compare CSV from the `compare` subcommand; output image path.
"""

import argparse

import numpy as np

import figstyle
from figstyle import column, read_csv, require_columns


def render(compare_csv, out):
    figstyle.apply_style()
    import matplotlib.pyplot as plt

    meta, cols, rows = read_csv(compare_csv)
    require_columns(cols, ["sweep_value", "gamma_bd", "gamma_db",
                           "rate_bd_fit", "rate_db_fit", "amplitude"],
                    compare_csv)
    v = np.array(column(rows, "sweep_value"))
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.semilogy(v, column(rows, "gamma_bd"), "o",
                color=figstyle.COLORS["bright"], label="bright->dim (Liouvillian)")
    ax.semilogy(v, column(rows, "gamma_db"), "s",
                color=figstyle.COLORS["dim"], label="dim->bright (Liouvillian)")
    ax.semilogy(v, column(rows, "rate_bd_fit"), "-",
                color=figstyle.COLORS["bright"], label="bright->dim (path action)")
    ax.semilogy(v, column(rows, "rate_db_fit"), "--",
                color=figstyle.COLORS["dim"], label="dim->bright (path action)")
    ax.set_xlabel("sweep value")
    ax.set_ylabel("switching rate [kappa]")
    ax.legend(fontsize=7, loc="lower left")
    ax2 = ax.twinx()
    ax2.plot(v, column(rows, "amplitude"), color=figstyle.COLORS["amplitude"],
             alpha=0.7)
    ax2.set_ylabel("|<a>|", color=figstyle.COLORS["amplitude"])
    fig.tight_layout()
    return figstyle.save(fig, out)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--compare", required=True)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()
    print(render(args.compare, args.out))


if __name__ == "__main__":
    main()
