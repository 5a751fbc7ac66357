"""Deterministic (mean-field) layer: fixed points, bistability boundaries,
and the lab-frame Duffing to rotating-frame Kerr mapping.

Mean-field reduction used throughout this module
------------------------------------------------
With alpha = (x_c + i p_c)/2 and n = |alpha|^2, the classical flow reads

    d(alpha)/dt = -i (delta + 2 chi n) alpha - epsilon - kappa alpha.

Setting the left side to zero gives alpha = -epsilon / (kappa + i(delta + 2 chi n))
and, after taking the squared modulus, the steady-state photon number solves

    4 chi^2 n^3 + 4 delta chi n^2 + (delta^2 + kappa^2) n - epsilon^2 = 0.

The drive enters the flow with a minus sign; the quantum modules drive with
+epsilon.  The two conventions are related by the exact parity symmetry
(epsilon, x, p) -> (-epsilon, -x, -p), so photon numbers, actions and rates
are even in epsilon while fixed-point coordinates flip sign.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import NearBifurcationWarning
from .params import DuffingParams, KerrParams

_STABILITIES = ("stable_dim", "stable_bright", "unstable")


@dataclass(frozen=True)
class ClassicalFixedPoint:
    """A steady state of the mean-field flow in the (x_c, p_c) plane."""

    x_c: float
    p_c: float
    n: float
    stability: str
    eigenvalues: tuple
    residual: float
    near_bifurcation: bool = False

    @property
    def alpha(self) -> complex:
        return complex(self.x_c, self.p_c) / 2.0


def classical_rhs(x_c, p_c, params: KerrParams):
    """Right-hand side of the mean-field flow (quantum coordinates zero)."""
    d, c, e, k = params.delta, params.chi, params.epsilon, params.kappa
    g = d + 0.5 * c * (x_c * x_c + p_c * p_c)
    return np.array([g * p_c - 2.0 * e - k * x_c,
                     -g * x_c - k * p_c])


def classical_jacobian(x_c, p_c, params: KerrParams):
    d, c, k = params.delta, params.chi, params.kappa
    return np.array([
        [c * p_c * x_c - k, d + 0.5 * c * (x_c * x_c + 3.0 * p_c * p_c)],
        [-d - 0.5 * c * (3.0 * x_c * x_c + p_c * p_c), -c * p_c * x_c - k],
    ])


def steady_state_cubic(params: KerrParams) -> np.ndarray:
    """Coefficients [n^3, n^2, n^1, n^0] of the steady-state photon-number cubic."""
    d, c, e, k = params.delta, params.chi, params.epsilon, params.kappa
    return np.array([4.0 * c * c, 4.0 * d * c, d * d + k * k, -e * e])


def _real_nonneg_roots(coeffs, imag_tol=1e-7):
    """Real non-negative roots via companion-matrix eigenvalues (np.roots)."""
    coeffs = np.asarray(coeffs, dtype=float)
    nz = np.nonzero(np.abs(coeffs) > 0)[0]
    if len(nz) == 0 or nz[0] == len(coeffs) - 1:
        return np.array([])
    coeffs = coeffs[nz[0]:]
    if len(coeffs) == 1:
        return np.array([])
    roots = np.roots(coeffs)
    sel = roots[(np.abs(roots.imag) < imag_tol * (1.0 + np.abs(roots.real)))
                & (roots.real > -1e-12)]
    return np.sort(np.clip(sel.real, 0.0, None))


def classical_fixed_points(params: KerrParams, bifurcation_rtol: float = 1e-8,
                           polish_steps: int = 60) -> list:
    """All mean-field fixed points, polished and stability-labelled.

    Returns one point in the monostable regime and three in the bistable one
    (two coincident near a spinodal, where ``near_bifurcation`` is set).
    Points are sorted by photon number.
    """
    d, c, e, k = params.delta, params.chi, params.epsilon, params.kappa
    if e == 0.0:
        # undriven oscillator: the origin (degenerate kappa=0 circles excluded)
        ev = np.linalg.eigvals(classical_jacobian(0.0, 0.0, params))
        stab = "stable_dim" if np.all(ev.real < 0) else "unstable"
        return [ClassicalFixedPoint(0.0, 0.0, 0.0, stab, tuple(ev), 0.0)]

    n_roots = _real_nonneg_roots(steady_state_cubic(params))
    # flag nearly coincident roots (spinodal)
    near = [False] * len(n_roots)
    for i in range(len(n_roots) - 1):
        gap = abs(n_roots[i + 1] - n_roots[i])
        if gap <= bifurcation_rtol * max(1.0, abs(n_roots[i]), abs(n_roots[i + 1])):
            near[i] = near[i + 1] = True

    points = []
    for n0, flag in zip(n_roots, near):
        denom = k + 1j * (d + 2.0 * c * n0)
        alpha = -e / denom
        z = np.array([2.0 * alpha.real, 2.0 * alpha.imag])
        for _ in range(polish_steps):
            F = classical_rhs(z[0], z[1], params)
            J = classical_jacobian(z[0], z[1], params)
            try:
                step = np.linalg.solve(J, -F)
            except np.linalg.LinAlgError:
                break
            # damped Newton: keep steps bounded near spinodals
            norm = np.linalg.norm(step)
            if norm > 1.0:
                step *= 1.0 / norm
            z = z + step
            if norm < 1e-15:
                break
        resid = float(np.linalg.norm(classical_rhs(z[0], z[1], params)))
        ev = np.linalg.eigvals(classical_jacobian(z[0], z[1], params))
        stable = bool(np.all(ev.real < 0))
        n_val = (z[0] * z[0] + z[1] * z[1]) / 4.0
        points.append([z[0], z[1], n_val, stable, tuple(ev), resid, flag])

    # dedupe coincident polished points
    unique = []
    for p in points:
        if not any(math.hypot(p[0] - q[0], p[1] - q[1])
                   <= 1e-10 * (1.0 + math.hypot(q[0], q[1])) for q in unique):
            unique.append(p)
    unique.sort(key=lambda p: p[2])

    stables = [p for p in unique if p[3]]
    # a single stable point is dim-like below the effective resonance
    # n* = -delta/(2 chi) and bright-like above it
    n_res = -d / (2.0 * c) if d * c < 0.0 else math.inf
    out = []
    for p in unique:
        if not p[3]:
            label = "unstable"
        elif len(stables) >= 2:
            label = "stable_bright" if p is stables[-1] else "stable_dim"
        else:
            label = "stable_bright" if p[2] > n_res else "stable_dim"
        out.append(ClassicalFixedPoint(p[0], p[1], p[2], label, p[4], p[5], p[6]))
    if any(p.near_bifurcation for p in out):
        warnings.warn("fixed points close to a spinodal; labels may be ambiguous",
                      NearBifurcationWarning, stacklevel=2)
    return out


def bistability_boundary(chi: float, kappa: float, delta_grid) -> list:
    """Spinodal drive amplitudes for each detuning on the grid.

    For each delta, the double roots of the steady-state cubic solve
    d(epsilon^2)/dn = (delta + 2 chi n)(delta + 6 chi n) + kappa^2 = 0,
    a quadratic in n; evaluating epsilon^2(n) at its two positive roots gives
    the lower and upper boundary amplitudes.  Entries without two distinct
    positive roots are marked non-bistable.

    Returns a list of dicts with keys delta, epsilon_lower, epsilon_upper,
    bistable (epsilon entries are None when not bistable).
    """
    out = []
    for d in np.atleast_1d(np.asarray(delta_grid, dtype=float)):
        entry = {"delta": float(d), "epsilon_lower": None,
                 "epsilon_upper": None, "bistable": False}
        disc = d * d - 3.0 * kappa * kappa
        if chi != 0.0 and disc > 0.0:
            sq = math.sqrt(disc)
            n_roots = np.array([(-2.0 * d * chi - abs(chi) * sq) / (6.0 * chi * chi),
                                (-2.0 * d * chi + abs(chi) * sq) / (6.0 * chi * chi)])
            n_roots = n_roots[n_roots > 0.0]
            if len(n_roots) == 2 and abs(n_roots[1] - n_roots[0]) > 0.0:
                e2 = n_roots * ((d + 2.0 * chi * n_roots) ** 2 + kappa * kappa)
                lo, hi = float(np.sqrt(e2.min())), float(np.sqrt(e2.max()))
                entry.update(epsilon_lower=lo, epsilon_upper=hi, bistable=True)
        out.append(entry)
    return out


def duffing_to_kerr(d: DuffingParams):
    """Map a driven Duffing oscillator to rotating-frame Kerr parameters.

    Uses the resonant variable change q = C (Q cos wt + P sin wt),
    p = -C w (Q sin wt - P cos wt) with C = (8 omega_F d_omega / 3 gamma)^(1/2),
    quantized by Q = sqrt(lam/2)(a + adag), P = i sqrt(lam/2)(adag - a) with
    [P, Q] = -i lam and lam = 3 hbar gamma / (8 omega_F^2 d_omega).

    Returns (KerrParams, lam).  The returned parameters satisfy
    lam = hbar |chi / delta| exactly (chi and delta carry opposite signs in
    the bistable arrangement, so the ratio itself is negative).

    Only mappings with gamma * d_omega > 0 are accepted: otherwise C is
    imaginary and the rotating-frame reduction does not exist.
    """
    dw = d.delta_omega
    if d.gamma_duffing == 0.0:
        raise ValueError("gamma_duffing must be nonzero")
    if d.gamma_duffing * dw <= 0.0:
        raise ValueError("rotating-frame mapping requires gamma_duffing and "
                         "(omega_F - omega_0) of the same sign")
    lam = 3.0 * d.hbar * d.gamma_duffing / (8.0 * d.omega_F ** 2 * dw)
    C = math.sqrt(8.0 * d.omega_F * dw / (3.0 * d.gamma_duffing))
    chi = lam * dw / d.hbar
    delta = -dw
    # drive matrix element; a global phase rotation brings it to the
    # i epsilon (adag - a) form
    epsilon = d.A * C * math.sqrt(lam / 2.0) / (2.0 * d.hbar)
    return KerrParams(delta=delta, chi=chi, epsilon=epsilon, kappa=0.0), lam
