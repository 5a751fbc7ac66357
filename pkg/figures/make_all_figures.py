#!/usr/bin/env python3
"""Render every figure from the committed fixture CSVs into out/."""

import pathlib
import sys

HERE = pathlib.Path(__file__).resolve().parent
sys.path.insert(0, str(HERE))

import plot_barrier
import plot_heatmap
import plot_paths3d
import plot_rates
import plot_trajectory
import plot_wigner

FIX = HERE / "fixtures"
OUT = HERE / "out"


def main():
    outputs = [
        plot_paths3d.render(FIX / "ref_path_bright.csv",
                            FIX / "ref_path_dim.csv",
                            OUT / "paths3d.svg",
                            wigner_csv=FIX / "ref_wigner.csv"),
        plot_trajectory.render(FIX / "ref_traj0.csv", OUT / "trajectory.svg"),
        plot_rates.render(FIX / "ref_compare.csv", OUT / "rates.svg"),
        plot_heatmap.render(FIX / "ref_liouvillian_sweep.csv",
                            OUT / "sweep_panels.svg"),
        plot_wigner.render(FIX / "ref_wigner.csv", OUT / "wigner.svg"),
        plot_barrier.render(FIX / "ref_barrier.csv", OUT / "barrier.svg"),
    ]
    for o in outputs:
        print(o)


if __name__ == "__main__":
    main()
