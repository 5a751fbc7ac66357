"""Wigner quasi-probability on a quadrature grid.

Convention: a = (x + i p)/sqrt(2), so the vacuum is W(x, p) =
exp(-x^2 - p^2)/pi with peak 1/pi and unit integral dx dp.  A classical
fixed point with amplitude alpha sits at (x, p) = sqrt(2) (Re alpha, Im alpha).
"""

from __future__ import annotations

import numpy as np
from scipy.special import eval_genlaguerre, gammaln


def wigner(rho: np.ndarray, x_grid, p_grid) -> np.ndarray:
    """W(x, p) on the outer product of the two grids; shape (len(x), len(p)).

    Uses the displacement-operator matrix elements in the Fock basis
    (generalized Laguerre polynomials); cost O(dim^2 * grid).
    """
    x = np.asarray(x_grid, dtype=float)
    p = np.asarray(p_grid, dtype=float)
    X, P = np.meshgrid(x, p, indexing="ij")
    alpha = (X + 1j * P) / np.sqrt(2.0)
    dim = rho.shape[0]
    beta = 2.0 * alpha
    babs2 = np.abs(beta) ** 2
    env = np.exp(-0.5 * babs2)
    W = np.zeros_like(X)

    # W = (2/pi) sum_mn rho_mn (-1)^m D(beta)_nm
    # D(beta)_nm = sqrt(m!/n!) beta^(n-m) e^{-|beta|^2/2} L_m^{n-m}(|beta|^2), n >= m
    lg = gammaln(np.arange(dim + 1) + 1.0)
    for m in range(dim):
        # diagonal
        D_mm = env * eval_genlaguerre(m, 0, babs2)
        W += np.real(rho[m, m]) * ((-1.0) ** m) * np.real(D_mm)
        for n in range(m + 1, dim):
            if rho[m, n] == 0 and rho[n, m] == 0:
                continue
            pref = np.exp(0.5 * (lg[m] - lg[n]))
            D_nm = pref * beta ** (n - m) * env * eval_genlaguerre(m, n - m, babs2)
            # rho_mn (-1)^m D_nm + rho_nm (-1)^n D_mn, with
            # D_mn = (-1)^(n-m) conj(D_nm) for beta -> beta (phase identity)
            term = rho[m, n] * ((-1.0) ** m) * D_nm \
                + rho[n, m] * ((-1.0) ** n) * ((-1.0) ** (n - m)) * np.conj(D_nm)
            W += np.real(term)
    W *= 2.0 / np.pi
    # convert from d^2alpha normalization to dx dp
    return W / 2.0


def wigner_peaks_to_alpha(x, p):
    """Map grid coordinates of a peak back to a field amplitude."""
    return (x + 1j * p) / np.sqrt(2.0)
