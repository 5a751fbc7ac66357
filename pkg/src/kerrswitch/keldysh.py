"""Saddle-point flow in the doubled (classical + quantum) phase space.

State layout is z = (x_c, p_c, x_q, p_q).  The subspace x_q = p_q = 0 is
exactly invariant ("classical plane") and carries the mean-field dynamics of
:mod:`kerrswitch.model`.

Sign convention: the flow implemented by :func:`eom_rhs` drives with
-2 epsilon (matching the mean-field reduction in :mod:`kerrswitch.model`),
while :func:`aux_hamiltonian` is written with +2 epsilon x_q.  The conserved
generator of the flow is therefore :func:`flow_hamiltonian`, i.e. the
auxiliary Hamiltonian with the drive sign reversed; the two conventions map
onto each other under the parity symmetry (epsilon, z) -> (-epsilon, -z).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import MonostableRegime, NearBifurcationWarning
from .model import classical_fixed_points
from .params import KerrParams

PLANE_TOL = 1e-9


@dataclass(frozen=True)
class PhasePoint:
    """A point of the doubled phase space."""

    x_c: float
    p_c: float
    x_q: float = 0.0
    p_q: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.x_c, self.p_c, self.x_q, self.p_q])

    def in_classical_plane(self, tol: float = PLANE_TOL) -> bool:
        return abs(self.x_q) <= tol and abs(self.p_q) <= tol

    @classmethod
    def from_array(cls, z) -> "PhasePoint":
        z = np.asarray(z, dtype=float)
        return cls(*z[:4])


def _state(z):
    if isinstance(z, PhasePoint):
        return z.as_array()
    return np.asarray(z, dtype=float)


def aux_hamiltonian(z, params: KerrParams):
    """Auxiliary Hamiltonian (drive term +2 epsilon x_q).

    Vectorized: z may be shape (4,) or (4, m).
    """
    xc, pc, xq, pq = _state(z)
    d, c, e, k = params.delta, params.chi, params.epsilon, params.kappa
    g = d + 0.5 * c * (xc * xc + pc * pc - xq * xq - pq * pq)
    return (g * (pc * xq - xc * pq)
            - k * (xc * xq + pc * pq)
            + k * (xq * xq + pq * pq)
            + 2.0 * e * xq)


def flow_hamiltonian(z, params: KerrParams):
    """The quantity conserved along :func:`eom_rhs` trajectories."""
    return aux_hamiltonian(z, params.flipped_drive())


def eom_rhs(z, params: KerrParams):
    """Saddle-point equations of motion (drive enters as -2 epsilon).

    Equal to the symplectic gradient (dH/dx_q, dH/dp_q, -dH/dx_c, -dH/dp_c)
    of :func:`flow_hamiltonian`.  Vectorized over trailing axes.
    """
    xc, pc, xq, pq = _state(z)
    d, c, e, k = params.delta, params.chi, params.epsilon, params.kappa
    f_xc = (d * pc - 2.0 * e + 2.0 * k * xq - k * xc
            + 0.5 * c * (pc**3 - 3.0 * pc * xq * xq + pc * xc * xc
                         - pc * pq * pq + 2.0 * xq * xc * pq))
    f_pc = (-d * xc - k * (pc - 2.0 * pq)
            - 0.5 * c * (pc * pc * xc + 2.0 * pc * xq * pq - xq * xq * xc
                         + xc**3 - 3.0 * xc * pq * pq))
    f_xq = (d * pq + k * xq
            + 0.5 * c * (pq * pc * pc - pq**3 + 3.0 * pq * xc * xc
                         - pq * xq * xq - 2.0 * xc * pc * xq))
    f_pq = (-d * xq + k * pq
            + 0.5 * c * (2.0 * pq * pc * xc + xq * pq * pq + xq**3
                         - xq * xc * xc - 3.0 * pc * pc * xq))
    return np.stack([f_xc, f_pc, f_xq, f_pq])


def jacobian(z, params: KerrParams):
    """Analytic Jacobian of :func:`eom_rhs`; (4, 4) or (4, 4, m)."""
    xc, pc, xq, pq = _state(z)
    d, c, k = params.delta, params.chi, params.kappa
    one = np.ones_like(xc)
    rows = [
        [c * pc * xc + c * pq * xq - k * one,
         1.5 * c * pc**2 - 0.5 * c * pq**2 + 0.5 * c * xc**2 - 1.5 * c * xq**2 + d * one,
         -3.0 * c * pc * xq + c * pq * xc + 2.0 * k * one,
         -c * pc * pq + c * xc * xq],
        [-0.5 * c * pc**2 + 1.5 * c * pq**2 - 1.5 * c * xc**2 + 0.5 * c * xq**2 - d * one,
         -c * pc * xc - c * pq * xq - k * one,
         -c * pc * pq + c * xc * xq,
         -c * pc * xq + 3.0 * c * pq * xc + 2.0 * k * one],
        [-c * pc * xq + 3.0 * c * pq * xc,
         c * pc * pq - c * xc * xq,
         -c * pc * xc - c * pq * xq + k * one,
         0.5 * c * pc**2 - 1.5 * c * pq**2 + 1.5 * c * xc**2 - 0.5 * c * xq**2 + d * one],
        [c * pc * pq - c * xc * xq,
         -3.0 * c * pc * xq + c * pq * xc,
         -1.5 * c * pc**2 + 0.5 * c * pq**2 - 0.5 * c * xc**2 + 1.5 * c * xq**2 - d * one,
         c * pc * xc + c * pq * xq + k * one],
    ]
    return np.array([[rows[i][j] for j in range(4)] for i in range(4)])


@dataclass(frozen=True)
class FixedPoint4D:
    """A classical fixed point lifted to the doubled space with its linearization.

    ``eigenvalues``/``eigenvectors`` follow numpy eig conventions (columns,
    unit norm, conjugate pairs adjacent is not guaranteed).  ``in_plane`` and
    ``out_of_plane`` index the eigenvector columns by whether their quantum
    components vanish.
    """

    point: PhasePoint
    kind: str
    n: float
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    in_plane: tuple
    out_of_plane: tuple

    def as_array(self) -> np.ndarray:
        return self.point.as_array()

    def out_of_plane_decaying(self):
        """(eigenvalue, real unit eigenvector) of the out-of-plane contracting mode."""
        cands = [i for i in self.out_of_plane if self.eigenvalues[i].real < 0]
        i = min(cands, key=lambda j: abs(self.eigenvalues[j].real))
        vec = np.real(self.eigenvectors[:, i])
        vec = vec / np.linalg.norm(vec)
        return self.eigenvalues[i], vec


def _lift(fp) -> np.ndarray:
    return np.array([fp.x_c, fp.p_c, 0.0, 0.0])


def classify_fixed_points(params: KerrParams, plane_tol: float = 1e-8,
                          stiffness_ratio: float = 1e-4) -> list:
    """Lift the mean-field fixed points to 4D and eigen-classify them.

    Raises
    ------
    MonostableRegime
        If only one classical fixed point exists.
    """
    cps = classical_fixed_points(params)
    if len(cps) < 3:
        raise MonostableRegime(
            f"{len(cps)} fixed point(s) at delta={params.delta}, chi={params.chi}, "
            f"epsilon={params.epsilon}, kappa={params.kappa}")
    out = []
    for cp in cps:
        z0 = _lift(cp)
        ev, V = np.linalg.eig(jacobian(z0, params))
        qnorm = np.linalg.norm(V[2:, :], axis=0)
        in_plane = tuple(int(i) for i in range(4) if qnorm[i] <= plane_tol)
        out_of_plane = tuple(int(i) for i in range(4) if qnorm[i] > plane_tol)
        out.append(FixedPoint4D(point=PhasePoint(*z0), kind=cp.stability, n=cp.n,
                                eigenvalues=ev, eigenvectors=V,
                                in_plane=in_plane, out_of_plane=out_of_plane))
    unstable = [f for f in out if f.kind == "unstable"]
    if unstable:
        u = unstable[0]
        rates = sorted(abs(u.eigenvalues.real))
        if rates[0] < stiffness_ratio * params.kappa:
            warnings.warn(
                f"slow escape rate kappa_2 = {rates[0]:.3e} << kappa; "
                "shooting will be stiff", NearBifurcationWarning, stacklevel=2)
    return out


def saddle_rates(params: KerrParams):
    """(kappa_1, kappa_2) of the unstable point, kappa_1 > kappa_2 > 0."""
    fps = classify_fixed_points(params)
    u = next(f for f in fps if f.kind == "unstable")
    re = np.sort(np.abs(u.eigenvalues.real))
    return float(re[-1]), float(re[0])


def phase_space_scale(fixed_points) -> float:
    """Largest coordinate magnitude among the fixed points."""
    return float(max(np.max(np.abs(f.as_array())) for f in fixed_points))
