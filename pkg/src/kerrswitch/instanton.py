"""Escape paths between metastable states and their actions.

The escape path from a stable point Z_j to the unstable point Z_u is a
connecting orbit of the saddle-point flow.  It is computed in two stages:

1. a backward shot from Z_u displaced along the out-of-plane contracting
   eigenvector (with a second-order curvature correction of the invariant
   manifold, without which the launch error along the fast in-plane mode
   caps the achievable endpoint accuracy near 1e-3 of the phase-space
   scale in double precision);
2. a multiple-shooting Newton polish with projection boundary conditions:
   the start deviation is confined to the outgoing out-of-plane eigenplane
   of Z_j, the end deviation to the contracting eigenplane of Z_u, with a
   phase anchor at the middle node and the total duration free.

An independent collocation route (:func:`refine_path_bvp`, backed by
scipy.integrate.solve_bvp) cross-checks the result.

``iS`` denotes the real value of the action integral
-int (x_q dx_c + p_q dp_c); physical escape paths have iS <= 0 and the
switching rate is ``attempt_frequency * exp(iS)``.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson, solve_bvp, solve_ivp

from . import keldysh
from .errors import (BothPathsSameTarget, BvpNoConvergence, InsufficientOverlap,
                     PathDidNotConverge, StiffnessFailure)
from .keldysh import PhasePoint, classify_fixed_points, eom_rhs, jacobian, phase_space_scale
from .params import KerrParams

__all__ = [
    "InstantonPath", "SwitchingRateEstimate", "bounce_path", "escape_path",
    "refine_path_bvp",
    "path_action", "switching_rate", "barrier_height", "fit_attempt_frequencies",
]


@dataclass(frozen=True)
class InstantonPath:
    """A discretized escape trajectory.

    ``points`` has shape (N, 4) in the (x_c, p_c, x_q, p_q) layout; the first
    and last rows are the exact fixed points (the formal t -> -/+ infinity
    limits of the orbit), so quantum components vanish there identically.
    """

    times: np.ndarray
    points: np.ndarray
    origin: str
    terminus: str
    action: float
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if np.any(np.diff(t) < 0):
            raise ValueError("times must be monotone nondecreasing")

    def phase_points(self):
        return [PhasePoint(*row) for row in self.points]

    def quantum_norms(self) -> np.ndarray:
        return np.linalg.norm(self.points[:, 2:], axis=1)

    def hamiltonian_values(self, params: KerrParams) -> np.ndarray:
        """Conserved-generator values along the path (zero for an exact orbit)."""
        return keldysh.flow_hamiltonian(self.points.T, params)


@dataclass(frozen=True)
class SwitchingRateEstimate:
    action_iS: float
    attempt_frequency: float
    rate: float
    direction: str


# ----------------------------------------------------------------------
# eigen-structure bookkeeping
# ----------------------------------------------------------------------

class _EigData:
    def __init__(self, params: KerrParams):
        fps = classify_fixed_points(params)
        self.params = params
        self.by_kind = {f.kind: f for f in fps}
        if set(self.by_kind) != {"stable_bright", "stable_dim", "unstable"}:
            raise PathDidNotConverge(
                f"unexpected fixed-point kinds {sorted(self.by_kind)}")
        self.scale = phase_space_scale(fps)
        u = self.by_kind["unstable"]
        self.Zu = u.as_array()
        lam2, v2 = u.out_of_plane_decaying()
        self.kappa2 = -float(lam2.real)
        self.v_escape = v2
        in_dec = [i for i in u.in_plane if u.eigenvalues[i].real < 0]
        self.kappa1 = -float(u.eigenvalues[in_dec[0]].real)
        v1 = np.real(u.eigenvectors[:, in_dec[0]])
        self.v_k1 = v1 / np.linalg.norm(v1)
        if self.kappa2 <= 0 or self.kappa1 <= self.kappa2:
            raise StiffnessFailure(
                f"saddle rates kappa1={self.kappa1}, kappa2={self.kappa2}")
        # second-order correction of the 1D escape manifold at Zu:
        # (J + 2 kappa2) w2 = -Q(v, v); the flow is cubic so the central
        # difference below is exact up to roundoff
        f0 = eom_rhs(self.Zu, params)
        h = 0.05
        qvv = (eom_rhs(self.Zu + h * v2, params) + eom_rhs(self.Zu - h * v2, params)
               - 2.0 * f0) / (2.0 * h * h)
        A = jacobian(self.Zu, params) + 2.0 * self.kappa2 * np.eye(4)
        try:
            self.w2 = -np.linalg.solve(A, qvv)
        except np.linalg.LinAlgError:
            self.w2 = -np.linalg.lstsq(A, qvv, rcond=None)[0]
        # projection rows: expanding modes at Zu (left eigenvectors)
        evu, Vu = u.eigenvalues, u.eigenvectors
        Wu = np.linalg.inv(Vu)
        exp_idx = [i for i in range(4) if evu[i].real > 0]
        self.Bu = np.vstack([np.real(Wu[i]) for i in exp_idx])
        self.omega_max = float(max(np.max(np.abs(f.eigenvalues.imag))
                                   for f in fps))
        self.stable_data = {}
        for kind in ("stable_bright", "stable_dim"):
            f = self.by_kind[kind]
            ev, V = f.eigenvalues, f.eigenvectors
            W = np.linalg.inv(V)
            out_idx = [i for i in f.out_of_plane if ev[i].real > 0]
            in_idx = list(f.in_plane)
            wrow = W[in_idx[0]]
            Bj = np.vstack([wrow.real, wrow.imag])
            lam_out = ev[out_idx[0]]
            vc = V[:, out_idx[0]]
            E1 = np.real(vc)
            E1 = E1 / np.linalg.norm(E1)
            E2 = np.imag(vc)
            E2 = E2 - E1 * (E1 @ E2)
            nrm = np.linalg.norm(E2)
            E2 = E2 / nrm if nrm > 0 else E2
            self.stable_data[kind] = dict(Z=f.as_array(), Bj=Bj, lam_out=lam_out,
                                          E1=E1, E2=E2)


# ----------------------------------------------------------------------
# stage 1: backward shot
# ----------------------------------------------------------------------

def _backward_shot(eig: _EigData, sign: int, delta_rel: float,
                   rtol: float = 1e-9, atol: float = 1e-11,
                   time_cap: float | None = None, norm_cap: float = 8.0,
                   wall_budget: float = 20.0):
    params = eig.params
    delta = delta_rel * eig.scale
    y0 = eig.Zu + sign * delta * eig.v_escape + delta * delta * eig.w2
    cap = norm_cap * eig.scale
    if time_cap is None:
        # escape from the saddle + relaxation spiral, with headroom
        time_cap = (math.log(1.0 / delta_rel) + 8.0) / eig.kappa2 \
            + 35.0 / max(params.kappa, 0.1 * eig.kappa2)
    Zb = eig.by_kind["stable_bright"].as_array()
    Zd = eig.by_kind["stable_dim"].as_array()
    capture = 5e-3 * eig.scale

    def rhs(s, y):
        return -eom_rhs(y, params)

    def blowup(s, y):
        return float(np.linalg.norm(y) - cap)
    blowup.terminal = True

    def near_b(s, y):
        return float(np.linalg.norm(y - Zb) - capture)
    near_b.terminal = True

    def near_d(s, y):
        return float(np.linalg.norm(y - Zd) - capture)
    near_d.terminal = True

    # wandering or blowing-up shots can grind the integrator to a halt;
    # a wall-clock cap keeps the retry ladder responsive
    t_start = time.monotonic()

    def wall(s, y):
        return wall_budget - (time.monotonic() - t_start)
    wall.terminal = True

    sol = solve_ivp(rhs, (0.0, time_cap), y0, method="DOP853", rtol=rtol,
                    atol=atol, dense_output=True,
                    events=[blowup, near_b, near_d, wall])
    sgrid = np.linspace(0.0, sol.t[-1], 20000)
    Y = sol.sol(sgrid)
    db = np.linalg.norm(Y - Zb[:, None], axis=0)
    dd = np.linalg.norm(Y - Zd[:, None], axis=0)
    if db.min() <= dd.min():
        kind, dist = "stable_bright", db
    else:
        kind, dist = "stable_dim", dd
    i = int(np.argmin(dist))
    if i == 0:
        raise PathDidNotConverge("backward shot never left the saddle region",
                                 {"min_dist": float(dist[i])})
    tfor = np.linspace(0.0, sgrid[i], 6000)
    Yf = sol.sol(sgrid[i] - tfor)
    return kind, tfor, Yf, float(dist[i])


# ----------------------------------------------------------------------
# stage 2: multiple-shooting polish
# ----------------------------------------------------------------------

def _batch_prop(ys, T, params, rtol=1e-12, atol=1e-13, dense=False):
    """Propagate K states and their state-transition matrices over [0, T]."""
    K = ys.shape[0]

    def rhs(t, w):
        W = w.reshape(K, 20)
        Z = W[:, :4].T
        M = W[:, 4:].reshape(K, 4, 4)
        F = eom_rhs(Z, params).T
        Jb = jacobian(Z, params)
        JM = np.einsum("ijk,kjl->kil", Jb, M)
        return np.concatenate([F, JM.reshape(K, 16)], axis=1).ravel()

    w0 = np.concatenate([ys, np.tile(np.eye(4).ravel(), (K, 1))], axis=1).ravel()
    sol = solve_ivp(rhs, (0.0, T), w0, method="DOP853", rtol=rtol, atol=atol,
                    dense_output=dense)
    W = sol.y[:, -1].reshape(K, 20)
    return W[:, :4], W[:, 4:].reshape(K, 4, 4), (sol if dense else None)


class _OrbitPolish:
    """Newton iteration on [y_0 .. y_K, T] with projection boundary conditions."""

    def __init__(self, params, Zj, Bj, Zu, Bu, K, anchor_y, anchor_f):
        self.params, self.Zj, self.Zu, self.K = params, Zj, Zu, K
        self.Bj, self.Bu = Bj, Bu
        self.anchor_y = anchor_y
        self.anchor_f = anchor_f / np.linalg.norm(anchor_f)
        self.m = K // 2

    def residual(self, x, rtol=1e-12):
        K = self.K
        ys = x[:4 * (K + 1)].reshape(K + 1, 4)
        T = x[-1]
        ends, Ms, _ = _batch_prop(ys[:K], T / K, self.params, rtol=rtol)
        R = np.empty(4 * K + 5)
        R[:4 * K] = (ends - ys[1:]).ravel()
        R[4 * K:4 * K + 2] = self.Bj @ (ys[0] - self.Zj)
        R[4 * K + 2:4 * K + 4] = self.Bu @ (ys[K] - self.Zu)
        R[4 * K + 4] = (ys[self.m] - self.anchor_y) @ self.anchor_f
        return R, ends, Ms

    def jacobian_matrix(self, x, ends, Ms):
        K = self.K
        Jm = np.zeros((4 * K + 5, 4 * (K + 1) + 1))
        Fends = eom_rhs(ends.T, self.params).T
        for i in range(K):
            r = slice(4 * i, 4 * i + 4)
            Jm[r, 4 * i:4 * i + 4] = Ms[i]
            Jm[r, 4 * (i + 1):4 * (i + 2)] -= np.eye(4)
            Jm[r, -1] = Fends[i] / K
        Jm[4 * K:4 * K + 2, 0:4] = self.Bj
        Jm[4 * K + 2:4 * K + 4, 4 * K:4 * K + 4] = self.Bu
        Jm[4 * K + 4, 4 * self.m:4 * self.m + 4] = self.anchor_f
        return Jm

    def solve(self, x0, iters=50, rtol=1e-12, tol=1e-10, early_abandon=False):
        scale = max(np.linalg.norm(self.Zj), np.linalg.norm(self.Zu), 1.0)
        x = x0.copy()
        R, ends, Ms = self.residual(x, rtol)
        r0 = float(np.linalg.norm(R))
        best = (r0, x.copy())
        stall = 0
        for it in range(iters):
            rn = np.linalg.norm(R)
            if rn < tol * scale:
                break
            if early_abandon and it == 6 and best[0] > 0.85 * r0:
                break
            Jm = self.jacobian_matrix(x, ends, Ms)
            try:
                dx = np.linalg.solve(Jm, -R)
            except np.linalg.LinAlgError:
                dx = np.linalg.lstsq(Jm, -R, rcond=None)[0]
            accepted = False
            for lam in (1.0, 0.5, 0.25, 0.1, 0.03):
                xn = x + lam * dx
                Rn, en, Mn = self.residual(xn, rtol)
                if np.linalg.norm(Rn) < (1.0 - 0.2 * lam) * rn:
                    x, R, ends, Ms = xn, Rn, en, Mn
                    accepted = True
                    break
            if not accepted:
                break
            new = float(np.linalg.norm(R))
            if new < best[0]:
                best = (new, x.copy())
            stall = stall + 1 if new > 0.7 * rn else 0
            if stall >= 3:
                break
        return best


def _seed_nodes(eig: _EigData, kind: str, tfor, Yf, delta_rel: float,
                r_target_rel: float, max_segments: int):
    """Node seed for the polish: analytic tails at both ends + the raw shot."""
    sd = eig.stable_data[kind]
    Zj, E1, E2, lam_out = sd["Z"], sd["E1"], sd["E2"], sd["lam_out"]
    r_tgt = r_target_rel * eig.scale
    d0 = Yf[:, 0] - Zj
    r_seed = float(np.linalg.norm(d0))
    th_seed = math.atan2(d0 @ E2, d0 @ E1)
    pad_j = max(math.log(max(r_seed / r_tgt, 1.0)), 0.0) / lam_out.real
    # unstable-end tail: the shot starts at distance ~delta from Zu.  Near a
    # spinodal the escape rate collapses and the tail pad would dominate the
    # orbit; the truncated tail contributes O(r^2) to the action regardless
    # of kappa_2, so a looser radius there is essentially free.
    r_tgt_u = r_tgt
    if eig.kappa2 < 0.25 * max(eig.params.kappa, 1e-12):
        r_tgt_u = max(r_tgt, 1.5e-3 * eig.scale)
    r_end_seed = float(np.linalg.norm(Yf[:, -1] - eig.Zu))
    pad_u = max(math.log(max(r_end_seed / r_tgt_u, 1.0)), 0.0) / eig.kappa2
    T = tfor[-1] + pad_j + pad_u
    rate = eig.omega_max + eig.params.kappa
    K = int(np.clip(math.ceil(0.8 * T * rate), 64, max_segments))
    tn = np.linspace(0.0, T, K + 1)
    nodes = np.empty((K + 1, 4))
    de = Yf[:, -1] - eig.Zu
    u_sign = 1.0 if de @ eig.v_escape >= 0 else -1.0
    for i, ti in enumerate(tn):
        if ti < pad_j:
            ang = th_seed - lam_out.imag * (pad_j - ti)
            rr = r_seed * math.exp(-lam_out.real * (pad_j - ti))
            nodes[i] = Zj + rr * (math.cos(ang) * E1 + math.sin(ang) * E2)
        elif ti <= pad_j + tfor[-1]:
            j = min(int(np.searchsorted(tfor, ti - pad_j)), Yf.shape[1] - 1)
            nodes[i] = Yf[:, j]
        else:
            u = r_end_seed * math.exp(-eig.kappa2 * (ti - pad_j - tfor[-1]))
            nodes[i] = eig.Zu + u_sign * u * eig.v_escape + u * u * eig.w2
    return nodes, T, K


def _polish_nodes(eig: _EigData, kind: str, nodes, T, newton_tol=1e-10,
                  prop_rtol=1e-12, early_abandon=False, max_segments=280):
    """Newton-polish the node chain; re-segment and retry when the duration
    drifts enough that the original mesh undersamples the orbit."""
    sd = eig.stable_data[kind]
    rate = eig.omega_max + eig.params.kappa
    for _round in range(3):
        K = nodes.shape[0] - 1
        anchor = nodes[K // 2].copy()
        prob = _OrbitPolish(eig.params, sd["Z"], sd["Bj"], eig.Zu, eig.Bu, K,
                            anchor, eom_rhs(anchor, eig.params))
        x0 = np.concatenate([nodes.ravel(), [T]])
        rn, x = prob.solve(x0, rtol=prop_rtol, tol=newton_tol,
                           early_abandon=early_abandon)
        ys = x[:4 * (K + 1)].reshape(K + 1, 4)
        T_new = float(x[-1])
        converged = rn < 1e-7 * eig.scale
        K_want = int(np.clip(math.ceil(0.8 * max(T_new, 1e-6) * rate),
                             64, max_segments))
        if converged or T_new <= 0 or K_want <= 1.2 * K:
            return rn, ys, T_new, prob
        # resample the current solution onto the finer mesh and retry
        s_old = np.linspace(0.0, 1.0, K + 1)
        s_new = np.linspace(0.0, 1.0, K_want + 1)
        nodes = np.empty((K_want + 1, 4))
        for j in range(4):
            nodes[:, j] = np.interp(s_new, s_old, ys[:, j])
        T = T_new
        early_abandon = False
    return rn, ys, T_new, prob


def _assemble_path(eig: _EigData, kind: str, ys, T, rnorm,
                   samples_per_segment=24, extra_diagnostics=None):
    """Dense-sample the polished orbit and attach exact endpoint rows."""
    params = eig.params
    K = ys.shape[0] - 1
    ends, Ms, dense = _batch_prop(ys[:K], T / K, params, rtol=1e-12, dense=True)
    m = samples_per_segment
    tloc = np.linspace(0.0, T / K, m + 1)
    Wall = dense.sol(tloc).reshape(K, 20, m + 1)
    pts = [ys[0][None, :]]
    times = [np.array([0.0])]
    for i in range(K):
        seg = Wall[i, :4, 1:].T
        pts.append(seg)
        times.append(i * (T / K) + tloc[1:])
    P = np.vstack(pts)
    tgrid = np.concatenate(times)
    Zj = eig.stable_data[kind]["Z"]
    r_start = float(np.linalg.norm(P[0] - Zj))
    r_end = float(np.linalg.norm(P[-1] - eig.Zu))
    # linearized bound on the action truncated outside the endpoint radii
    tail_bound = 0.5 * (r_start ** 2 + r_end ** 2)
    lam_out = eig.stable_data[kind]["lam_out"]
    pad_j = math.log(max(r_start / (1e-12 * eig.scale), 2.0)) / lam_out.real
    pad_u = math.log(max(r_end / (1e-12 * eig.scale), 2.0)) / eig.kappa2
    full_t = np.concatenate([[0.0], tgrid + pad_j, [T + pad_j + pad_u]])
    full_p = np.vstack([Zj, P, eig.Zu])
    # action on the stored grid; derivative values are exact on the flow
    F = eom_rhs(full_p.T, params)
    integrand = full_p[:, 2] * F[0] + full_p[:, 3] * F[1]
    iS = -simpson(integrand, x=full_t)
    iS_half = -simpson(integrand[::2], x=full_t[::2])
    diag = {
        "newton_residual": float(rnorm),
        "duration": float(T),
        "segments": int(K),
        "r_start": r_start,
        "r_end": r_end,
        "scale": float(eig.scale),
        "action_half_grid_diff": float(abs(iS - iS_half)),
        "action_tail_bound": float(tail_bound),
        "kappa1": eig.kappa1,
        "kappa2": eig.kappa2,
    }
    if extra_diagnostics:
        diag.update(extra_diagnostics)
    return InstantonPath(times=full_t, points=full_p, origin=kind,
                         terminus="unstable", action=float(iS), diagnostics=diag)


def _seed_from_path(eig: _EigData, seed: InstantonPath, max_segments: int):
    """Warm-start nodes from a path computed at nearby parameters.

    Endpoint motion is absorbed by a linear blend between the old and new
    fixed points; the Newton polish removes the interior mismatch.
    """
    kind = seed.origin
    sd = eig.stable_data[kind]
    inner_t = seed.times[1:-1]
    inner_p = seed.points[1:-1]
    T = float(inner_t[-1] - inner_t[0])
    s_old = (inner_t - inner_t[0]) / T
    Zj_old, Zu_old = seed.points[0], seed.points[-1]
    rate = eig.omega_max + eig.params.kappa
    K = int(np.clip(math.ceil(0.8 * T * rate), 64, max_segments))
    s_new = np.linspace(0.0, 1.0, K + 1)
    nodes = np.empty((K + 1, 4))
    for j in range(4):
        nodes[:, j] = np.interp(s_new, s_old, inner_p[:, j])
    shift_j = sd["Z"] - Zj_old
    shift_u = eig.Zu - Zu_old
    nodes += np.outer(1.0 - s_new, shift_j) + np.outer(s_new, shift_u)
    return nodes, T, K, kind


def _single_bounce(eig: _EigData, sign: int, delta_rel, endpoint_rel,
                   max_segments, newton_tol):
    attempts = []
    shots = []
    for drel in sorted({delta_rel, 1e-5, 1e-4, 1e-3, 1e-6}):
        try:
            shots.append((drel,) + _backward_shot(eig, sign, drel))
        except PathDidNotConverge as exc:
            attempts.append((drel, None, str(exc)))
    shots.sort(key=lambda s: s[4])
    for drel, kind, tfor, Yf, miss in shots[:3]:
        if miss > 0.1 * eig.scale:
            attempts.append((drel, None, f"miss {miss / eig.scale:.2e}"))
            continue
        seg_caps = (max_segments, 2 * max_segments) if miss < 3e-2 * eig.scale \
            else (max_segments,)
        for seg_cap in seg_caps:
            nodes, T, K = _seed_nodes(eig, kind, tfor, Yf, drel, endpoint_rel,
                                      seg_cap)
            rn, ys, Tsol, prob = _polish_nodes(eig, kind, nodes, T,
                                               newton_tol=newton_tol)
            if rn < 1e-7 * eig.scale and Tsol > 0:
                path = _assemble_path(eig, kind, ys, Tsol, rn,
                                      extra_diagnostics={"raw_miss": miss,
                                                         "delta_offset": drel})
                if path.action <= 1e-8:
                    return kind, path
                attempts.append((drel, K, f"nonphysical iS {path.action:.2e}"))
                continue
            attempts.append((drel, K, f"newton residual {rn / eig.scale:.2e}"))
    raise PathDidNotConverge(
        f"bounce polish failed for sign {sign}", {"attempts": attempts})


def _polish_seed_path(eig: _EigData, seed: InstantonPath, max_segments: int,
                      newton_tol: float):
    nodes, T, K, kind = _seed_from_path(eig, seed, max_segments)
    rn, ys, Tsol, prob = _polish_nodes(eig, kind, nodes, T,
                                       newton_tol=newton_tol,
                                       early_abandon=True)
    if rn >= 1e-7 * eig.scale:
        raise PathDidNotConverge(
            f"warm-start polish stalled at {rn / eig.scale:.2e}")
    if Tsol <= 0:
        raise PathDidNotConverge(f"polish collapsed to duration {Tsol:.3f}")
    path = _assemble_path(eig, kind, ys, Tsol, rn,
                          extra_diagnostics={"warm_start": True})
    if path.action > 1e-8:
        raise PathDidNotConverge(
            f"warm start converged to a nonphysical orbit (iS = {path.action:.3e})")
    return path


def bounce_path(params: KerrParams, delta_offset: float = 1e-5,
                endpoint_tol: float = 1e-6, max_segments: int = 280,
                newton_tol: float = 1e-10, seeds=None,
                fresh_fallback: bool = True):
    """Both escape paths (bright -> unstable, dim -> unstable).

    Parameters
    ----------
    delta_offset : float
        Launch displacement along the escape eigenvector, relative to the
        phase-space scale.  A ladder of offsets is shot and the closest
        approaches seed the Newton polish.
    endpoint_tol : float
        Target distance (relative to scale) between the truncated orbit and
        the fixed points at both ends.
    seeds : pair of InstantonPath, optional
        Converged paths from a nearby parameter point; they seed the polish
        directly (parameter continuation) with fresh shooting as fallback.

    Returns
    -------
    (InstantonPath, InstantonPath)
        Paths from the bright and from the dim state, oriented forward in
        time (stable point -> unstable point).
    """
    eig = _EigData(params)
    results = {}
    if seeds is not None:
        for seed in seeds:
            if seed is None or seed.origin in results:
                continue
            try:
                results[seed.origin] = _polish_seed_path(eig, seed,
                                                         max_segments,
                                                         newton_tol)
            except (PathDidNotConverge, np.linalg.LinAlgError):
                pass
        if set(results) == {"stable_bright", "stable_dim"}:
            return results["stable_bright"], results["stable_dim"]
        if not fresh_fallback:
            missing = {"stable_bright", "stable_dim"} - set(results)
            raise PathDidNotConverge(
                f"warm start failed for {sorted(missing)}")
    if set(results) != {"stable_bright", "stable_dim"}:
        errors = []
        fresh = {}
        for sign in (+1, -1):
            try:
                kind, path = _single_bounce(eig, sign, delta_offset,
                                            endpoint_tol, max_segments,
                                            newton_tol)
            except PathDidNotConverge as exc:
                errors.append(f"sign {sign}: {exc}")
                continue
            if kind in fresh:
                raise BothPathsSameTarget(
                    f"both launch signs relaxed to {kind}")
            fresh[kind] = path
        for kind, path in fresh.items():
            results.setdefault(kind, path)
        if set(results) != {"stable_bright", "stable_dim"}:
            missing = {"stable_bright", "stable_dim"} - set(results)
            raise PathDidNotConverge(
                f"no escape path found from {sorted(missing)}",
                {"errors": errors})
    return results["stable_bright"], results["stable_dim"]


def escape_path(params: KerrParams, origin: str, seeds=None,
                delta_offset: float = 1e-5, endpoint_tol: float = 1e-6,
                max_segments: int = 280, newton_tol: float = 1e-10,
                fresh_fallback: bool = True) -> InstantonPath:
    """Single escape path from ``origin`` ("stable_bright" or "stable_dim").

    Fresh shooting only tracks directions whose orbit the backward flow can
    shadow; the other direction is reached by passing ``seeds`` from a
    neighbouring parameter point (continuation).
    """
    if origin not in ("stable_bright", "stable_dim"):
        raise ValueError(f"bad origin {origin!r}")
    eig = _EigData(params)
    if seeds is not None:
        seed_list = seeds if isinstance(seeds, (tuple, list)) else [seeds]
        for seed in seed_list:
            if seed is None or seed.origin != origin:
                continue
            try:
                return _polish_seed_path(eig, seed, max_segments, newton_tol)
            except (PathDidNotConverge, np.linalg.LinAlgError):
                break
        if not fresh_fallback:
            raise PathDidNotConverge(f"warm start failed for {origin}")
    errors = []
    for sign in (+1, -1):
        try:
            kind, path = _single_bounce(eig, sign, delta_offset, endpoint_tol,
                                        max_segments, newton_tol)
        except PathDidNotConverge as exc:
            errors.append(f"sign {sign}: {exc}")
            continue
        if kind == origin:
            return path
        errors.append(f"sign {sign} relaxed to {kind}")
    raise PathDidNotConverge(f"no escape path from {origin}",
                             {"errors": errors})


def bounce_offset_convergence(params: KerrParams, delta_offset: float = 1e-5,
                              rtol: float = 1e-5) -> dict:
    """Relative action change when the launch offset is halved.

    Emits a warning when the change exceeds ``rtol`` (it is typically at the
    1e-9 level because the Newton polish removes the offset dependence).
    """
    b1, d1 = bounce_path(params, delta_offset=delta_offset)
    b2, d2 = bounce_path(params, delta_offset=0.5 * delta_offset)
    rel_b = abs(b1.action - b2.action) / max(abs(b1.action), 1e-300)
    rel_d = abs(d1.action - d2.action) / max(abs(d1.action), 1e-300)
    if max(rel_b, rel_d) > rtol:
        warnings.warn(f"action changed by {max(rel_b, rel_d):.2e} under offset "
                      "halving", stacklevel=2)
    return {"bright": rel_b, "dim": rel_d}


# ----------------------------------------------------------------------
# collocation cross-check
# ----------------------------------------------------------------------

def _propagation_defect(sol, T, params, n_sub: int = 4000) -> float:
    """Max mismatch when re-propagating the collocation spline segmentwise.

    An orbit-quality metric independent of the collocation error estimator:
    each of ``n_sub`` spline samples is integrated to the next sample time
    and compared with the spline there.
    """
    sub = np.linspace(0.0, 1.0, n_sub + 1)
    starts = sol.sol(sub[:-1]).T
    targets = sol.sol(sub[1:]).T
    K = n_sub

    def rhs(t, w):
        Z = w.reshape(K, 4).T
        return eom_rhs(Z, params).T.ravel()

    r = solve_ivp(rhs, (0.0, T / n_sub), starts.ravel(), method="DOP853",
                  rtol=1e-12, atol=1e-13)
    ends = r.y[:, -1].reshape(K, 4)
    return float(np.max(np.linalg.norm(ends - targets, axis=1)))


def refine_path_bvp(seed: InstantonPath, params: KerrParams, tol: float = 1e-8,
                    max_nodes: int = 24000, mesh_points: int = 4001) -> InstantonPath:
    """Re-solve the seed's boundary value problem by collocation.

    Boundary conditions confine the start deviation to the outgoing
    out-of-plane eigenplane of the origin and the end deviation to the
    contracting eigenplane of the unstable point; the phase is pinned by the
    seed's start deviation and the total duration is a free parameter.

    The returned path is certified by an independent re-propagation defect
    (max segment mismatch relative to the phase-space scale) <= ``tol``; the
    collocation error estimator of solve_bvp is reported in the diagnostics
    but saturates near 1e-7 on stiff connecting orbits regardless of mesh.
    """
    eig = _EigData(params)
    kind = seed.origin
    sd = eig.stable_data[kind]
    Zj, Bj, Bu, Zu = sd["Z"], sd["Bj"], eig.Bu, eig.Zu

    inner_t = seed.times[1:-1]
    inner_p = seed.points[1:-1]
    if inner_p.shape[0] < 8:
        raise BvpNoConvergence("seed path has too few interior points")
    if np.max(np.linalg.norm(inner_p[:, 2:], axis=1)) <= 1e-12 * eig.scale:
        raise BvpNoConvergence("seed lies in the classical plane; the only "
                               "solution is the trivial constant path")
    T0 = float(inner_t[-1] - inner_t[0])
    s_seed = (inner_t - inner_t[0]) / T0
    d0 = inner_p[0] - Zj
    w_pin = d0 / np.linalg.norm(d0)
    c_pin = float(np.linalg.norm(d0))

    def fun(s, z, p):
        return p[0] * eom_rhs(z, params)

    def fun_jac(s, z, p):
        Jb = p[0] * jacobian(z, params)
        dfdp = eom_rhs(z, params)
        return Jb, dfdp[:, None, :]

    def bc(ya, yb, p):
        return np.concatenate([Bj @ (ya - Zj), Bu @ (yb - Zu),
                               [(ya - Zj) @ w_pin - c_pin]])

    def bc_jac(ya, yb, p):
        da = np.zeros((5, 4))
        db = np.zeros((5, 4))
        dp = np.zeros((5, 1))
        da[0:2] = Bj
        db[2:4] = Bu
        da[4] = w_pin
        return da, db, dp

    from scipy.interpolate import CubicSpline
    spline = CubicSpline(s_seed, inner_p, axis=0)
    m = min(mesh_points, max_nodes // 4)
    s_mesh = np.linspace(0.0, 1.0, m)
    z_mesh = spline(s_mesh).T
    sol = solve_bvp(fun, bc, s_mesh, z_mesh, p=[T0], fun_jac=fun_jac,
                    bc_jac=bc_jac, tol=tol, max_nodes=max_nodes, verbose=0)
    est_resid = float(np.max(sol.rms_residuals)) if sol.rms_residuals.size else np.inf
    if sol.status == 2:
        raise BvpNoConvergence("singular collocation Jacobian",
                               max_residual=est_resid)
    T = float(sol.p[0])
    defect = _propagation_defect(sol, T, params)
    max_resid = defect / eig.scale
    if max_resid > tol:
        raise BvpNoConvergence(
            f"re-propagation defect {max_resid:.2e} > tol {tol:.1e} "
            f"(estimator rms {est_resid:.2e}, status {sol.status})",
            max_residual=max_resid)
    ns = 8001
    sg = np.linspace(0.0, 1.0, ns)
    Z = sol.sol(sg)
    r_start = float(np.linalg.norm(Z[:, 0] - Zj))
    r_end = float(np.linalg.norm(Z[:, -1] - Zu))
    lam_out = sd["lam_out"]
    pad_j = math.log(max(r_start / (1e-12 * eig.scale), 2.0)) / lam_out.real
    pad_u = math.log(max(r_end / (1e-12 * eig.scale), 2.0)) / eig.kappa2
    tgrid = np.concatenate([[0.0], sg * T + pad_j, [T + pad_j + pad_u]])
    pgrid = np.vstack([Zj, Z.T, Zu])
    F = eom_rhs(pgrid.T, params)
    integrand = pgrid[:, 2] * F[0] + pgrid[:, 3] * F[1]
    iS = -simpson(integrand, x=tgrid)
    iS_half = -simpson(integrand[::2], x=tgrid[::2])
    diag = {
        "bvp_status": int(sol.status),
        "bvp_max_residual": max_resid,
        "bvp_estimator_rms": est_resid,
        "bvp_nodes": int(sol.x.size),
        "duration": T,
        "r_start": r_start,
        "r_end": r_end,
        "scale": float(eig.scale),
        "action_half_grid_diff": float(abs(iS - iS_half)),
        "seed_action": float(seed.action),
    }
    return InstantonPath(times=tgrid, points=pgrid, origin=kind,
                         terminus="unstable", action=float(iS), diagnostics=diag)


# ----------------------------------------------------------------------
# actions and rates
# ----------------------------------------------------------------------

def path_action(path: InstantonPath, params: KerrParams,
                nonphysical_tol: float = 1e-6) -> float:
    """Quadrature of -int (x_q dx_c + p_q dp_c) over the stored grid.

    Derivatives are evaluated from the flow at the stored points, and a
    half-grid Richardson difference is attached to the path diagnostics by
    the constructors; here it is recomputed for the stored resolution.
    """
    P = path.points
    t = path.times
    F = eom_rhs(P.T, params)
    integrand = P[:, 2] * F[0] + P[:, 3] * F[1]
    iS = -float(simpson(integrand, x=t))
    if iS > nonphysical_tol:
        warnings.warn(f"positive action iS={iS:.3e}: nonphysical path",
                      stacklevel=2)
    return iS


def switching_rate(action_iS: float, attempt_frequency: float,
                   direction: str = "bright->dim") -> SwitchingRateEstimate:
    """rate = attempt_frequency * exp(iS)."""
    if attempt_frequency <= 0:
        raise ValueError("attempt_frequency must be positive")
    rate = attempt_frequency * math.exp(action_iS)
    return SwitchingRateEstimate(action_iS=float(action_iS),
                                 attempt_frequency=float(attempt_frequency),
                                 rate=float(rate), direction=direction)


def barrier_height(action_iS: float, lam: float) -> float:
    """Activation barrier R = lam * iS (so that exp(R / lam) = exp(iS)).

    R is <= 0 for physical escape paths; report |R| as a barrier magnitude.
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    return float(lam * action_iS)


@dataclass(frozen=True)
class AttemptFrequencyFit:
    omega_bd: float
    omega_db: float
    rms_log10_bd: float
    rms_log10_db: float
    n_points: int


def fit_attempt_frequencies(sweep_actions, actions_bd, actions_db,
                            sweep_rates, rates_bd, rates_db,
                            match_rtol: float = 1e-9) -> AttemptFrequencyFit:
    """One constant attempt frequency per direction from a joint sweep.

    Least-squares in the log domain: log(gamma) = log(omega) + iS, so
    log(omega) is the mean of log(gamma) - iS over the common sweep points.
    """
    sa = np.asarray(sweep_actions, dtype=float)
    sr = np.asarray(sweep_rates, dtype=float)
    abd = np.asarray(actions_bd, dtype=float)
    adb = np.asarray(actions_db, dtype=float)
    rbd = np.asarray(rates_bd, dtype=float)
    rdb = np.asarray(rates_db, dtype=float)
    ia, ir = [], []
    for i, v in enumerate(sa):
        j = np.where(np.isclose(sr, v, rtol=match_rtol, atol=0.0))[0]
        if len(j):
            ia.append(i)
            ir.append(int(j[0]))
    ia = np.array(ia, dtype=int)
    ir = np.array(ir, dtype=int)
    ok = (np.isfinite(abd[ia]) & np.isfinite(adb[ia])
          & (rbd[ir] > 0) & (rdb[ir] > 0))
    ia, ir = ia[ok], ir[ok]
    if len(ia) < 3:
        raise InsufficientOverlap(f"only {len(ia)} common sweep points")

    def one(actions, rates):
        resid = np.log(rates) - actions
        logw = float(np.mean(resid))
        rms = float(np.sqrt(np.mean((resid - logw) ** 2)) / math.log(10.0))
        return math.exp(logw), rms

    wbd, rms_bd = one(abd[ia], rbd[ir])
    wdb, rms_db = one(adb[ia], rdb[ir])
    return AttemptFrequencyFit(omega_bd=wbd, omega_db=wdb, rms_log10_bd=rms_bd,
                               rms_log10_db=rms_db, n_points=int(len(ia)))
