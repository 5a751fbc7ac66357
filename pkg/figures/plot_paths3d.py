#!/usr/bin/env python3
"""Escape paths in (x_c, p_c, x_q) with a Wigner underlay, plus the quantum
components against time.

Inputs: two path CSVs (t, x_c, p_c, x_q, p_q, H), optional Wigner CSV
(x, p, W), output image path.
"""

import argparse

import numpy as np

import figstyle
from figstyle import column, read_csv, require_columns


def render(path_bright, path_dim, out, wigner_csv=None):
    figstyle.apply_style()
    import matplotlib.pyplot as plt

    fig = plt.figure(figsize=(9.5, 3.2))
    ax3 = fig.add_subplot(1, 3, (1, 2), projection="3d")
    axq = fig.add_subplot(1, 3, 3)

    if wigner_csv:
        meta, cols, rows = read_csv(wigner_csv)
        require_columns(cols, ["x", "p", "W"], wigner_csv)
        x = np.array(column(rows, "x"))
        p = np.array(column(rows, "p"))
        W = np.array(column(rows, "W"))
        xs = np.unique(x)
        ps = np.unique(p)
        Wg = W.reshape(len(xs), len(ps))
        # the quantum steady state mirrors the mean-field layer's drive sign:
        # display in the path coordinates (x_c, p_c) = -sqrt(2) (x, p)
        Xg, Pg = np.meshgrid(-np.sqrt(2.0) * xs, -np.sqrt(2.0) * ps,
                             indexing="ij")
        ax3.contourf(Xg, Pg, Wg, zdir="z", offset=0.0, levels=24,
                     cmap="Greys", alpha=0.75)

    for path_csv, key in ((path_bright, "bright"), (path_dim, "dim")):
        meta, cols, rows = read_csv(path_csv)
        require_columns(cols, ["t", "x_c", "p_c", "x_q"], path_csv)
        xc = column(rows, "x_c")
        pc = column(rows, "p_c")
        xq = column(rows, "x_q")
        pq = column(rows, "p_q")
        t = column(rows, "t")
        ax3.plot(xc, pc, xq, color=figstyle.COLORS[key],
                 label=f"escape from {key}")
        axq.plot(t, xq, color=figstyle.COLORS[key], label=f"x_q ({key})")
        axq.plot(t, pq, color=figstyle.COLORS[key], linestyle="--",
                 label=f"p_q ({key})")
    ax3.set_xlabel("x_c")
    ax3.set_ylabel("p_c")
    ax3.set_zlabel("x_q")
    ax3.legend(loc="upper left", fontsize=7)
    axq.set_xlabel("t [1/kappa]")
    axq.set_ylabel("quantum components")
    axq.legend(fontsize=6)
    fig.tight_layout()
    return figstyle.save(fig, out)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bright", required=True)
    ap.add_argument("--dim", required=True)
    ap.add_argument("--wigner")
    ap.add_argument("--out", required=True)
    args = ap.parse_args()
    print(render(args.bright, args.dim, args.out, args.wigner))


if __name__ == "__main__":
    main()
