"""Exact quantum benchmark in a truncated Fock space.

The master equation is used in the trace-preserving form

    d(rho)/dt = -i [H, rho] + kappa (2 a rho adag - adag a rho - rho adag a)

whose amplitude decay rate is kappa, matching the stable-point linearization
of the saddle-point flow.  Superoperators use column-stacking vectorization:
vec(A X B) = (B^T kron A) vec(X).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import (DegenerateGap, DegenerateKernel, NoSignChange,
                     OscillatoryMode, OverlapWarning, TruncationWarning)
from .model import classical_fixed_points
from .params import KerrParams

DENSE_EIG_MAX_DIM2 = 4096  # largest dim^2 for full dense eigensolves


def annihilation(dim: int) -> sp.csr_matrix:
    """Truncated annihilation operator, <n-1|a|n> = sqrt(n)."""
    if dim < 2:
        raise ValueError("dim must be >= 2")
    return sp.diags(np.sqrt(np.arange(1.0, dim)), 1).tocsr()


def number_op(dim: int) -> sp.csr_matrix:
    return sp.diags(np.arange(float(dim))).tocsr()


def build_hamiltonian(params: KerrParams, dim: int) -> np.ndarray:
    """H = delta n + chi n(n-1) + i epsilon (adag - a), dense (dim, dim)."""
    if dim < 2:
        raise ValueError("dim must be >= 2")
    n = np.arange(float(dim))
    H = np.diag(params.delta * n + params.chi * n * (n - 1.0)).astype(complex)
    drive = 1j * params.epsilon * np.sqrt(np.arange(1.0, dim))
    H += np.diag(drive, -1) + np.diag(np.conj(drive), 1)
    return H


def liouvillian(params: KerrParams, dim: int) -> sp.csc_matrix:
    """Sparse matrix of rho -> -i[H, rho] + kappa(2 a rho adag - {adag a, rho})."""
    H = sp.csr_matrix(build_hamiltonian(params, dim))
    a = annihilation(dim)
    nmat = number_op(dim)
    eye = sp.identity(dim, format="csr")
    k = params.kappa
    L = (-1j * (sp.kron(eye, H) - sp.kron(H.T, eye))
         + k * (2.0 * sp.kron(a.conj(), a)
                - sp.kron(eye, nmat) - sp.kron(nmat.T, eye)))
    return L.tocsc()


def _vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).flatten(order="F")


def _unvec(v: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(v).reshape(dim, dim, order="F")


def _hermitize(M: np.ndarray) -> np.ndarray:
    return 0.5 * (M + M.conj().T)


def steady_state(L: sp.spmatrix, residual_tol: float = 1e-8) -> np.ndarray:
    """Kernel state of the Liouvillian: Hermitian, unit trace.

    Solved directly by appending the trace condition as a rank-one term;
    the kernel residual is verified against ``residual_tol``.
    """
    N = L.shape[0]
    dim = int(round(math.sqrt(N)))
    weight = max(float(np.abs(L.diagonal()).mean()), 1.0)
    tr_row = np.zeros(N)
    tr_row[:: dim + 1] = 1.0
    e0 = np.zeros(N)
    e0[0] = 1.0
    A = (L + weight * sp.csc_matrix(np.outer(e0, tr_row))).tocsc()
    x = spla.spsolve(A, weight * e0)
    rho = _hermitize(_unvec(x, dim))
    tr = np.trace(rho).real
    if abs(tr) < 1e-300:
        raise DegenerateKernel("steady-state solve returned a traceless matrix")
    rho = rho / tr
    resid = float(np.linalg.norm(L @ _vec(rho)))
    if resid > residual_tol:
        raise DegenerateKernel(
            f"steady-state residual {resid:.2e} > {residual_tol:.1e}; "
            "kernel may be degenerate or truncation too small")
    return rho


def _zero_projector_apply(v, rho_ss_vec, tr_row):
    """Remove the stationary component using the spectral projector of 0."""
    return v - rho_ss_vec * (tr_row @ v) / (tr_row @ rho_ss_vec)


def asymptotic_mode(L: sp.spmatrix, kappa: float,
                    rho_ss: np.ndarray | None = None,
                    k_eigs: int = 10, imag_tol_factor: float = 1e-6,
                    residual_tol: float = 1e-8):
    """Slowest-decaying Liouvillian eigenvector and its rate.

    Returns (rho_ad, gamma_ad) with Tr(rho_ad^2) = 1, Tr(rho_ad) = 0 and the
    sign fixed so that the bright (higher photon number) component is
    positive, i.e. Tr(rho_ad n) > 0.

    Raises OscillatoryMode when the slowest mode carries an oscillation
    frequency above ``imag_tol_factor * kappa``, and DegenerateKernel when a
    second eigenvalue sits at zero.
    """
    N = L.shape[0]
    dim = int(round(math.sqrt(N)))
    if rho_ss is None:
        rho_ss = steady_state(L)
    rho_ss_vec = _vec(rho_ss)
    tr_row = np.zeros(N)
    tr_row[:: dim + 1] = 1.0

    sigma = 0.2 * max(kappa, 1e-12)
    shifted = (L - sigma * sp.identity(N, format="csc")).tocsc()
    lu = spla.splu(shifted)

    op = spla.LinearOperator((N, N), matvec=lu.solve, dtype=complex)
    mu, _ = spla.eigs(op, k=min(k_eigs, N - 2), which="LM")
    vals = sigma + 1.0 / mu
    vals = vals[np.argsort(-vals.real)]
    near_zero = np.sum(np.abs(vals.real) < 1e-10)
    if near_zero > 1:
        raise DegenerateKernel(f"{near_zero} eigenvalues within 1e-10 of zero")
    decaying = [v for v in vals if v.real < -1e-10]
    if not decaying:
        raise DegenerateGap("no decaying eigenvalue found near zero")
    lam_scan = max(decaying, key=lambda v: v.real)
    if abs(lam_scan.imag) > imag_tol_factor * kappa:
        raise OscillatoryMode(
            f"slowest mode decays at {-lam_scan.real:.3e} but oscillates at "
            f"{lam_scan.imag:.3e}")

    # deflated inverse iteration pins the eigenpair even when gamma_ad is
    # many orders below the shift
    rng = np.random.default_rng(5)
    v = rng.standard_normal(N) + 1j * rng.standard_normal(N)
    v = _zero_projector_apply(v, rho_ss_vec, tr_row)
    lam_old = None
    for _ in range(60):
        v = lu.solve(v)
        v = _zero_projector_apply(v, rho_ss_vec, tr_row)
        v = v / np.linalg.norm(v)
        lam_rq = np.vdot(v, L @ v) / np.vdot(v, v)
        if lam_old is not None and abs(lam_rq - lam_old) < 1e-14 + 1e-10 * abs(lam_rq):
            break
        lam_old = lam_rq
    resid = np.linalg.norm(L @ v - lam_rq * v)
    if resid > residual_tol:
        raise DegenerateGap(
            f"asymptotic-mode residual {resid:.2e} > {residual_tol:.1e}")
    if abs(lam_rq - lam_scan) > 1e-6 * (1.0 + abs(lam_scan)):
        raise DegenerateGap(
            f"refinement converged to {lam_rq:.3e}, away from the scan "
            f"candidate {lam_scan:.3e}")
    lam = lam_rq
    if abs(lam.imag) > imag_tol_factor * kappa:
        raise OscillatoryMode(
            f"slowest mode decays at {-lam.real:.3e} but oscillates at "
            f"{lam.imag:.3e}")

    M = _unvec(v, dim)
    A = _hermitize(M)
    B = 0.5j * (M - M.conj().T)  # also Hermitian
    R = A if np.linalg.norm(A) >= np.linalg.norm(B) else B
    norm2 = np.trace(R @ R).real
    if norm2 <= 0:
        raise DegenerateGap("asymptotic mode has zero Hermitian part")
    R = R / math.sqrt(norm2)
    nvec = np.arange(dim)
    if float(np.real(R.diagonal()) @ nvec) < 0.0:
        R = -R
    return R, float(-lam.real)


@dataclass(frozen=True)
class MetastableDecomposition:
    """Bright/dim decomposition of the steady state.

    ``f_b < 0 < f_d`` are the positivity-scan roots; the mixture becomes the
    dim state at f_b (bright component extinguished) and the bright state at
    f_d.  Occupations follow p_b = f_b/(f_b - f_d), p_d = -f_d/(f_b - f_d)
    and the rates are gamma_bd = p_d gamma_ad, gamma_db = p_b gamma_ad.
    """

    rho_ss: np.ndarray
    rho_ad: np.ndarray
    gamma_ad: float
    f_b: float
    f_d: float
    p_b: float
    p_d: float
    rho_b: np.ndarray
    rho_d: np.ndarray
    gamma_bd: float
    gamma_db: float
    overlap: float
    diagnostics: dict = field(default_factory=dict)


def _min_eig(M: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(M)[0])


def extract_metastable(rho_ss: np.ndarray, rho_ad: np.ndarray,
                       gamma_ad: float = float("nan"), psd_tol: float = 1e-8,
                       f_max: float = 10.0, f_xtol: float = 1e-10,
                       overlap_tol: float = 0.01) -> MetastableDecomposition:
    """Positivity scan of tau(f) = rho_ss + f rho_ad.

    Brackets the two values where min-eig tau(f) crosses -psd_tol (one on
    each side of f = 0) and bisects them to ``f_xtol``.
    """
    if _min_eig(rho_ss) < -psd_tol:
        raise ValueError("rho_ss is not positive semidefinite at psd_tol")

    def mineig(f):
        return _min_eig(rho_ss + f * rho_ad)

    def find_root(sign):
        f_in, f_out = 0.0, sign * 1e-6
        while mineig(f_out) > -psd_tol:
            f_in, f_out = f_out, f_out * 2.0
            if abs(f_out) > f_max:
                raise NoSignChange(
                    f"min-eig tau(f) stayed above -{psd_tol:g} out to f={f_out:g}")
        while abs(f_out - f_in) > f_xtol:
            mid = 0.5 * (f_in + f_out)
            if mineig(mid) > -psd_tol:
                f_in = mid
            else:
                f_out = mid
        return 0.5 * (f_in + f_out)

    f_d = find_root(+1.0)
    f_b = find_root(-1.0)
    p_b = f_b / (f_b - f_d)
    p_d = -f_d / (f_b - f_d)
    rho_dim = rho_ss + f_b * rho_ad   # bright component extinguished
    rho_bright = rho_ss + f_d * rho_ad
    rho_dim = rho_dim / np.trace(rho_dim).real
    rho_bright = rho_bright / np.trace(rho_bright).real
    overlap = float(np.real(np.trace(rho_bright @ rho_dim)))
    if overlap > overlap_tol:
        warnings.warn(f"metastable states overlap: Tr(rho_b rho_d) = {overlap:.3g}",
                      OverlapWarning, stacklevel=2)
    g_ad = float(gamma_ad)
    return MetastableDecomposition(
        rho_ss=rho_ss, rho_ad=rho_ad, gamma_ad=g_ad, f_b=float(f_b),
        f_d=float(f_d), p_b=float(p_b), p_d=float(p_d), rho_b=rho_bright,
        rho_d=rho_dim, gamma_bd=float(p_d * g_ad), gamma_db=float(p_b * g_ad),
        overlap=overlap,
        diagnostics={"psd_tol": psd_tol, "f_xtol": f_xtol})


def cavity_amplitude(rho: np.ndarray) -> float:
    """|Tr(a rho)|."""
    dim = rho.shape[0]
    a = annihilation(dim)
    return float(abs((a @ rho).trace()))


def mean_photon_number(rho: np.ndarray) -> float:
    dim = rho.shape[0]
    return float(np.real(np.arange(dim) @ np.real(rho.diagonal())))


def top_level_population(rho: np.ndarray, levels: int = 2) -> float:
    return float(np.sum(np.real(rho.diagonal()[-levels:])))


def choose_truncation(params: KerrParams, floor: int = 10) -> int:
    """dim = ceil(n_max + 5 sqrt(n_max) + 10) from the largest classical root."""
    pts = classical_fixed_points(params)
    n_max = max(p.n for p in pts)
    return max(floor, int(math.ceil(n_max + 5.0 * math.sqrt(max(n_max, 0.0)) + 10.0)))


def validate_truncation(rho_ss: np.ndarray, tol: float = 1e-8) -> float:
    """Warn when the top two Fock levels carry more than ``tol`` population."""
    pop = top_level_population(rho_ss, 2)
    if pop > tol:
        warnings.warn(f"top-two-level population {pop:.2e} > {tol:.0e}; "
                      "increase the truncation", TruncationWarning, stacklevel=2)
    return pop


def switching_rates_from_liouvillian(params: KerrParams, dim: int | None = None,
                                     psd_tol: float = 1e-8) -> MetastableDecomposition:
    """Full pipeline: Liouvillian -> steady state -> slow mode -> decomposition."""
    if dim is None:
        dim = choose_truncation(params)
    L = liouvillian(params, dim)
    rho_ss = steady_state(L)
    validate_truncation(rho_ss)
    rho_ad, gamma_ad = asymptotic_mode(L, params.kappa, rho_ss=rho_ss)
    return extract_metastable(rho_ss, rho_ad, gamma_ad, psd_tol=psd_tol)
