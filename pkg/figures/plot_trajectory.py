#!/usr/bin/env python3
"""Telegraph-signal view of a stochastic trajectory: amplitude and phase
against time with the dwell labels shaded.

Input: trajectory CSV (t, amplitude, phase, label); output image path.
"""

import argparse

import numpy as np

import figstyle
from figstyle import column, read_csv, require_columns


def render(traj_csv, out):
    figstyle.apply_style()
    import matplotlib.pyplot as plt

    meta, cols, rows = read_csv(traj_csv)
    require_columns(cols, ["t", "amplitude", "phase", "label"], traj_csv)
    t = np.array(column(rows, "t"))
    amp = np.array(column(rows, "amplitude"))
    ph = np.array(column(rows, "phase"))
    labels = [r["label"] for r in rows]

    fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(7.5, 4.2))
    ax1.plot(t, amp, lw=0.7, color="k")
    in_bright = np.array([lab == "bright" for lab in labels])
    ax1.fill_between(t, 0, amp.max() * 1.05, where=in_bright,
                     color=figstyle.COLORS["bright"], alpha=0.15,
                     linewidth=0)
    ax1.set_ylabel("|<a>|")
    ax2.plot(t, ph, lw=0.7, color="k")
    ax2.set_ylabel("arg <a>")
    ax2.set_xlabel("t [1/kappa]")
    fig.tight_layout()
    return figstyle.save(fig, out)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--traj", required=True)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()
    print(render(args.traj, args.out))


if __name__ == "__main__":
    main()
