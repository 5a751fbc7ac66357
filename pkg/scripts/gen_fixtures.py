#!/usr/bin/env python3
"""Regenerate the frozen oracle fixtures under tests/fixtures/.

Each block computes reference values with a method independent of the code
path it later checks (bisection scans, finite differences, dense
eigensolves, closed forms) and freezes them as JSON.  Rerun after any
intentional physics change; the test suite compares against these files.
"""

import json
import pathlib
import sys

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

import kerrswitch as ks
from kerrswitch import fock, instanton, model

FIXDIR = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures"
FIXDIR.mkdir(parents=True, exist_ok=True)


def dump(name, payload):
    path = FIXDIR / name
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True, default=float)
        fh.write("\n")
    print(f"wrote {path}")


# ---------------------------------------------------------------- model
def cubic_roots_by_scan():
    """Brute-force sign-change scan of the steady-state cubic + bisection."""
    d, c, e, k = 5.8, -0.5, -4.0, 1.0

    def poly(n):
        return 4 * c * c * n**3 + 4 * d * c * n**2 + (d * d + k * k) * n - e * e

    n_hi = 4 * d / abs(2 * c)
    grid = np.linspace(0.0, n_hi, 200001)
    vals = poly(grid)
    roots = []
    for i in range(len(grid) - 1):
        if vals[i] == 0.0:
            roots.append(grid[i])
        elif vals[i] * vals[i + 1] < 0:
            lo, hi = grid[i], grid[i + 1]
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if poly(lo) * poly(mid) <= 0:
                    hi = mid
                else:
                    lo = mid
            roots.append(0.5 * (lo + hi))
    return {"params": {"delta": d, "chi": c, "epsilon": e, "kappa": k},
            "n_roots": sorted(roots)}


def window_edges_by_count_scan():
    """Fixed-point-count changes 1 -> 3 -> 1 along a dense epsilon scan."""
    chi, kappa, delta = -0.1, 1.0, 6.33
    eps_grid = np.linspace(0.05, 20.0, 4000)
    counts = []
    for e in eps_grid:
        pts = model.classical_fixed_points(
            ks.KerrParams(delta=delta, chi=chi, epsilon=e, kappa=kappa))
        counts.append(len(pts))
    counts = np.array(counts)
    changes = np.nonzero(np.diff(counts) != 0)[0]

    def refine(i):
        lo, hi = eps_grid[i], eps_grid[i + 1]
        c_lo = counts[i]
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            c_mid = len(model.classical_fixed_points(
                ks.KerrParams(delta=delta, chi=chi, epsilon=mid, kappa=kappa)))
            if c_mid == c_lo:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    edges = [refine(i) for i in changes]
    return {"chi": chi, "kappa": kappa, "delta": delta,
            "epsilon_edges_from_count_scan": edges}


def duffing_lambda_identity():
    """Both sides of the scaled-Planck-constant identity, evaluated separately."""
    duff = ks.DuffingParams(omega_0=0.95, omega_F=1.0,
                            gamma_duffing=(1.0 / 78.0) * 8.0 * 1.0 * 0.05 / 3.0,
                            A=0.01)
    lam_formula = 3.0 * duff.hbar * duff.gamma_duffing / (
        8.0 * duff.omega_F**2 * duff.delta_omega)
    kerr, lam_returned = model.duffing_to_kerr(duff)
    return {"duffing": duff.to_dict(),
            "lambda_from_formula": lam_formula,
            "lambda_returned": lam_returned,
            "chi_over_delta": kerr.chi / kerr.delta,
            "kerr": kerr.to_dict()}


# ---------------------------------------------------------------- keldysh
def saddle_eigs_by_fd():
    """4D eigenvalues at each fixed point from a finite-difference Jacobian."""
    p = ks.KerrParams(delta=5.8, chi=-0.5, epsilon=-4.0, kappa=1.0)
    pts = model.classical_fixed_points(p)
    out = []
    h = 1e-6
    for cp in pts:
        z0 = np.array([cp.x_c, cp.p_c, 0.0, 0.0])
        J = np.empty((4, 4))
        for j in range(4):
            dz = np.zeros(4)
            dz[j] = h
            J[:, j] = (ks.eom_rhs(z0 + dz, p) - ks.eom_rhs(z0 - dz, p)) / (2 * h)
        ev = np.linalg.eigvals(J)
        ev = ev[np.lexsort((ev.imag, ev.real))]
        out.append({"stability": cp.stability, "n": cp.n,
                    "eig_real": list(ev.real), "eig_imag": list(ev.imag)})
    return {"params": p.to_dict(), "points": out}


def reference_actions():
    """Escape actions at the reference bistable point, cross-checked by
    independent shooting and collocation routes."""
    p = ks.KerrParams(delta=5.8, chi=-0.5, epsilon=-4.0, kappa=1.0)
    pb, pd = instanton.bounce_path(p)
    rb = instanton.refine_path_bvp(pb, p)
    rd = instanton.refine_path_bvp(pd, p)
    return {"params": p.to_dict(),
            "iS_bright_shoot": pb.action, "iS_dim_shoot": pd.action,
            "iS_bright_bvp": rb.action, "iS_dim_bvp": rd.action}


# ---------------------------------------------------------------- fock
def gamma_ad_dense_oracle():
    """Slowest decay rate from a full dense eigensolve (dim <= 40)."""
    delta, chi, kappa = 6.0, -1.0, 1.0
    b = model.bistability_boundary(chi, kappa, [delta])[0]
    eps_mid = 0.5 * (b["epsilon_lower"] + b["epsilon_upper"])
    p = ks.KerrParams(delta=delta, chi=chi, epsilon=eps_mid, kappa=kappa)
    dim = 30
    L = fock.liouvillian(p, dim).toarray()
    vals = np.linalg.eigvals(L)
    vals = vals[np.argsort(-vals.real)]
    nonzero = [v for v in vals if v.real < -1e-10]
    gamma_ad = -nonzero[0].real
    return {"params": p.to_dict(), "dim": dim, "epsilon_mid": eps_mid,
            "epsilon_window": [b["epsilon_lower"], b["epsilon_upper"]],
            "gamma_ad_dense": gamma_ad,
            "slowest_imag": nonzero[0].imag}


def crossing_by_bisection():
    """Drive amplitude where p_b = 1/2, bisected on the extraction pipeline."""
    delta, chi, kappa, dim = 6.0, -1.0, 1.0, 32

    def p_b(eps):
        dec = fock.switching_rates_from_liouvillian(
            ks.KerrParams(delta=delta, chi=chi, epsilon=eps, kappa=kappa), dim=dim)
        return dec.p_b

    lo, hi = 3.0, 4.0
    assert p_b(lo) < 0.5 < p_b(hi)
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        if p_b(mid) < 0.5:
            lo = mid
        else:
            hi = mid
    return {"delta": delta, "chi": chi, "kappa": kappa, "dim": dim,
            "epsilon_star": 0.5 * (lo + hi)}


def truncation_dims():
    """choose_truncation outputs plus the doubling-stability check."""
    cases = []
    for (delta, chi, eps) in ((6.0, -1.0, 2.93), (6.33, -0.1, 10.0)):
        p = ks.KerrParams(delta=delta, chi=chi, epsilon=eps, kappa=1.0)
        dim = fock.choose_truncation(p)
        vals = {}
        for d2 in (dim, 2 * dim):
            L = fock.liouvillian(p, d2)
            rho = fock.steady_state(L)
            _, g = fock.asymptotic_mode(L, 1.0, rho_ss=rho)
            vals[d2] = {"gamma_ad": g,
                        "amplitude": fock.cavity_amplitude(rho),
                        "top2": fock.top_level_population(rho)}
        rel = abs(vals[dim]["gamma_ad"] - vals[2 * dim]["gamma_ad"]) / vals[2 * dim]["gamma_ad"]
        rel_amp = abs(vals[dim]["amplitude"] - vals[2 * dim]["amplitude"]) / vals[2 * dim]["amplitude"]
        cases.append({"params": p.to_dict(), "dim": dim,
                      "gamma_ad_at_dim": vals[dim]["gamma_ad"],
                      "gamma_ad_at_2dim": vals[2 * dim]["gamma_ad"],
                      "rel_gamma_change": rel, "rel_amplitude_change": rel_amp,
                      "top2_at_dim": vals[dim]["top2"]})
    return {"cases": cases}


def aux_hamiltonian_monomials():
    """Value table of the auxiliary Hamiltonian from an expanded monomial list."""
    import sympy as sp

    xc, pc, xq, pq, d, c, e, k = sp.symbols("x_c p_c x_q p_q delta chi eps kappa")
    H = ((d + sp.Rational(1, 2) * c * (xc**2 + pc**2 - xq**2 - pq**2))
         * (pc * xq - xc * pq)
         - k * (xc * xq + pc * pq) + k * (xq**2 + pq**2) + 2 * e * xq)
    poly = sp.Poly(sp.expand(H), xc, pc, xq, pq)
    rng = np.random.default_rng(42)
    records = []
    for _ in range(40):
        z = rng.uniform(-3, 3, size=4)
        pr = rng.uniform(-2, 2, size=4)
        subs = {xc: z[0], pc: z[1], xq: z[2], pq: z[3],
                d: pr[0], c: pr[1], e: pr[2], k: abs(pr[3])}
        val = 0.0
        for powers, coeff in poly.terms():
            val += float(coeff.subs(subs)) * np.prod(z ** np.array(powers))
        records.append({"z": list(z), "delta": pr[0], "chi": pr[1],
                        "epsilon": pr[2], "kappa": abs(pr[3]), "H": val})
    return {"records": records}


def fig2_liouvillian_window():
    """Fine sweep at (chi, delta) = (-1, 6): gamma_ad, p_b and the operational
    extraction window used by the acceptance suite."""
    delta, chi, kappa, dim = 6.0, -1.0, 1.0, 32
    rows = []
    for eps in np.round(np.arange(1.8, 4.65, 0.1), 10):
        try:
            dec = fock.switching_rates_from_liouvillian(
                ks.KerrParams(delta=delta, chi=chi, epsilon=float(eps), kappa=kappa),
                dim=dim)
            rows.append({"epsilon": float(eps), "gamma_ad": dec.gamma_ad,
                         "p_b": dec.p_b, "ok": True})
        except ks.errors.KerrSwitchError as exc:  # outside extraction window
            rows.append({"epsilon": float(eps), "note": str(exc), "ok": False})
    return {"delta": delta, "chi": chi, "kappa": kappa, "dim": dim, "rows": rows}


if __name__ == "__main__":
    import warnings
    warnings.simplefilter("ignore")
    dump("model_cubic_roots.json", cubic_roots_by_scan())
    dump("model_window_edges.json", window_edges_by_count_scan())
    dump("model_duffing_lambda.json", duffing_lambda_identity())
    dump("keldysh_saddle_eigs.json", saddle_eigs_by_fd())
    dump("keldysh_reference_actions.json", reference_actions())
    dump("fock_gamma_ad_dense.json", gamma_ad_dense_oracle())
    dump("fock_crossing.json", crossing_by_bisection())
    dump("fock_truncation.json", truncation_dims())
    dump("keldysh_aux_monomials.json", aux_hamiltonian_monomials())
    dump("fock_fig2_window.json", fig2_liouvillian_window())
