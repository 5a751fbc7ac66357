#!/usr/bin/env python3
"""Density plot of a Wigner grid.

Input: wigner CSV (x, p, W); output image path.
"""

import argparse

import numpy as np

import figstyle
from figstyle import column, read_csv, require_columns


def render(wigner_csv, out):
    figstyle.apply_style()
    import matplotlib.pyplot as plt

    meta, cols, rows = read_csv(wigner_csv)
    require_columns(cols, ["x", "p", "W"], wigner_csv)
    x = np.array(column(rows, "x"))
    p = np.array(column(rows, "p"))
    W = np.array(column(rows, "W"))
    xs = np.unique(x)
    ps = np.unique(p)
    Wg = W.reshape(len(xs), len(ps))
    fig, ax = plt.subplots(figsize=(4.6, 4.0))
    vmax = np.abs(Wg).max()
    im = ax.pcolormesh(xs, ps, Wg.T, cmap="RdBu_r", vmin=-vmax, vmax=vmax,
                       shading="nearest")
    fig.colorbar(im, ax=ax, label="W(x, p)")
    ax.set_xlabel("x")
    ax.set_ylabel("p")
    ax.set_aspect("equal")
    fig.tight_layout()
    return figstyle.save(fig, out)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--wigner", required=True)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()
    print(render(args.wigner, args.out))


if __name__ == "__main__":
    main()
