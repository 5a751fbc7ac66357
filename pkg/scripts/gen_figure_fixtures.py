#!/usr/bin/env python3
"""Produce the committed CSV fixtures consumed by the figure scripts.

Runs the CLI pipelines at small, fast parameter points; reruns should be
byte-identical (timestamps are omitted).
"""

import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from kerrswitch.cli import main  # noqa: E402

FIX = ROOT / "figures" / "fixtures"
FIX.mkdir(parents=True, exist_ok=True)


def run(args):
    rc = main(args + ["--no-timestamp"])
    if rc != 0:
        raise SystemExit(f"CLI failed ({rc}): {args}")


def main_():
    ref = ["--delta", "5.8", "--chi", "-0.5", "--epsilon", "-4.0",
           "--kappa", "1.0"]
    run(["instanton", *ref, "--no-bvp-check", "--prefix", str(FIX / "ref")])
    (FIX / "ref_instanton.json").unlink(missing_ok=True)

    # Wigner of the steady state at the mirrored drive sign (the quantum
    # steady state of the +epsilon model underlies the -epsilon paths)
    run(["wigner", "--delta", "5.8", "--chi", "-0.5", "--epsilon", "4.0",
         "--kappa", "1.0", "--grid-points", "81", "--prefix", str(FIX / "ref")])
    (FIX / "ref_wigner.wig").unlink(missing_ok=True)

    run(["trajectory", "--delta", "6.0", "--chi", "-1.0", "--epsilon", "3.6",
         "--kappa", "1.0", "--dim", "24", "--dt", "0.001", "--duration", "400",
         "--seed", "11", "--record-stride", "100", "--prefix", str(FIX / "ref")])

    run(["liouvillian", "--delta", "6.0", "--chi", "-1.0", "--epsilon", "3.6",
         "--kappa", "1.0", "--dim", "28", "--sweep", "epsilon:2.0:4.4:13",
         "--prefix", str(FIX / "ref")])

    run(["compare", "--delta", "6.0", "--chi", "-1.0", "--epsilon", "3.6",
         "--kappa", "1.0", "--dim", "28", "--sweep", "epsilon:3.0:3.8:3",
         "--no-bvp-check", "--prefix", str(FIX / "ref")])

    # barrier sweep fixture: five interior points of the reference window
    import numpy as np

    import kerrswitch as ks
    from kerrswitch import sweeps
    from kerrswitch.csvio import write_csv

    delta, chi, eps = 1.0, -1.0 / 78.0, 2.44
    kappas = [0.15, 0.20, 0.25, 0.30, 0.35]
    p0 = ks.KerrParams(delta=delta, chi=chi, epsilon=eps, kappa=0.25)
    rows = sweeps.barrier_sweep(p0, kappas, lam=abs(chi / delta))
    for r in rows:
        r["sweep_value"] = r["kappa"]
    write_csv(FIX / "ref_barrier.csv", "barrier", rows,
              '{"method": "barrier-fixture"}', timestamp=False)
    print("figure fixtures written to", FIX)


if __name__ == "__main__":
    main_()
