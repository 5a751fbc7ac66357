"""Parameter-sweep drivers connecting the three rate pipelines."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

import numpy as np

from . import fock, instanton
from .errors import KerrSwitchError
from .model import classical_fixed_points
from .params import KerrParams


def sweep_values(start: float, stop: float, count: int, spacing: str = "linear"):
    if count < 1:
        raise ValueError("count must be >= 1")
    if count == 1:
        return np.array([start], dtype=float)
    if spacing == "linear":
        return np.linspace(start, stop, count)
    if spacing == "log":
        if start <= 0 or stop <= 0:
            raise ValueError("log spacing requires positive endpoints")
        return np.geomspace(start, stop, count)
    raise ValueError(f"unknown spacing {spacing!r}")


def apply_sweep(params: KerrParams, name: str, value: float) -> KerrParams:
    if name not in ("delta", "chi", "epsilon", "kappa"):
        raise ValueError(f"cannot sweep over {name!r}")
    return replace(params, **{name: float(value)})


def _map(fn, items, workers: int):
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ----------------------------------------------------------------------
# Liouvillian sweep
# ----------------------------------------------------------------------

def _liouvillian_point(args):
    params, dim, psd_tol = args
    row = {"delta": params.delta, "chi": params.chi, "epsilon": params.epsilon,
           "kappa": params.kappa, "dim": dim, "gamma_ad": math.nan,
           "p_b": math.nan, "p_d": math.nan, "gamma_bd": math.nan,
           "gamma_db": math.nan, "amplitude": math.nan, "note": ""}
    try:
        if dim is None:
            dim = fock.choose_truncation(params)
            row["dim"] = dim
        L = fock.liouvillian(params, dim)
        rho_ss = fock.steady_state(L)
        row["amplitude"] = fock.cavity_amplitude(rho_ss)
        rho_ad, gamma_ad = fock.asymptotic_mode(L, params.kappa, rho_ss=rho_ss)
        row["gamma_ad"] = gamma_ad
        dec = fock.extract_metastable(rho_ss, rho_ad, gamma_ad, psd_tol=psd_tol)
        row.update(p_b=dec.p_b, p_d=dec.p_d, gamma_bd=dec.gamma_bd,
                   gamma_db=dec.gamma_db)
    except KerrSwitchError as exc:
        row["note"] = f"{type(exc).__name__}: {exc}"
    return row


def liouvillian_sweep(params: KerrParams, name: str, values, dim=None,
                      psd_tol: float = 1e-8, workers: int = 1):
    items = [(apply_sweep(params, name, v), dim, psd_tol) for v in values]
    rows = _map(_liouvillian_point, items, workers)
    for v, row in zip(values, rows):
        row["sweep_value"] = float(v)
    return rows


# ----------------------------------------------------------------------
# instanton sweep
# ----------------------------------------------------------------------

def _instanton_point(params, bvp_check, bvp_tol, seeds=None):
    row = {"delta": params.delta, "chi": params.chi, "epsilon": params.epsilon,
           "kappa": params.kappa, "iS_bd": math.nan, "iS_db": math.nan,
           "iS_bvp_bd": math.nan, "iS_bvp_db": math.nan, "note": ""}
    paths = None
    try:
        pb, pd = instanton.bounce_path(params, seeds=seeds)
        paths = (pb, pd)
        row["iS_bd"] = pb.action
        row["iS_db"] = pd.action
        if bvp_check:
            rb = instanton.refine_path_bvp(pb, params, tol=bvp_tol)
            rd = instanton.refine_path_bvp(pd, params, tol=bvp_tol)
            row["iS_bvp_bd"] = rb.action
            row["iS_bvp_db"] = rd.action
    except KerrSwitchError as exc:
        row["note"] = f"{type(exc).__name__}: {exc}"
    return row, paths


def _instanton_point_star(args):
    return _instanton_point(*args)


def _continue_paths(params, name, from_value, to_value, seeds, depth: int = 4):
    """Walk the escape-path pair from one sweep value to another.

    Warm-starts the polish at ``to_value`` from ``seeds``; when that stalls,
    halves the parameter step (up to ``depth`` times) and walks through the
    intermediate values, which are not reported.
    """
    p_to = apply_sweep(params, name, to_value)
    if from_value is None or seeds is None:
        try:
            return instanton.bounce_path(p_to)
        except KerrSwitchError:
            return None
    try:
        return instanton.bounce_path(p_to, seeds=seeds, fresh_fallback=False)
    except KerrSwitchError:
        pass
    if depth <= 0:
        return None
    mid = 0.5 * (from_value + to_value)
    seeds_mid = _continue_paths(params, name, from_value, mid, seeds, depth - 1)
    if seeds_mid is None:
        return None
    return _continue_paths(params, name, mid, to_value, seeds_mid, depth - 1)


def instanton_sweep(params: KerrParams, name: str, values, bvp_check: bool = True,
                    bvp_tol: float = 1e-8, workers: int = 1,
                    omega_bd: float = 1.0, omega_db: float = 0.1,
                    continuation: bool = True, progress=None):
    """Escape actions along a sweep.

    With ``continuation`` the points are processed from the middle of the
    grid outward and each polish is warm-started from its converged
    neighbour, which carries the sweep through regions where a fresh
    backward shot cannot track the orbit.  ``workers`` is ignored in that
    mode (the chain is sequential by construction).
    """
    values = list(values)
    rows_by_index = {}
    if continuation and len(values) > 1:
        order = np.argsort(np.abs(np.arange(len(values))
                                  - (len(values) - 1) / 2.0), kind="stable")
        seeds_low = seeds_high = None
        anchor_low = anchor_high = None
        mid = True
        for idx in order:
            idx = int(idx)
            value = values[idx]
            p = apply_sweep(params, name, value)
            low_side = idx <= (len(values) - 1) / 2.0
            seeds = seeds_low if low_side else seeds_high
            anchor = anchor_low if low_side else anchor_high
            if seeds is None:
                row, paths = _instanton_point(p, bvp_check, bvp_tol)
            else:
                paths = _continue_paths(params, name, anchor, value, seeds)
                row, paths = _instanton_point(p, bvp_check, bvp_tol,
                                              seeds=paths)
            rows_by_index[idx] = row
            if progress is not None:
                progress(value, row)
            if paths is not None:
                if mid:
                    seeds_low = seeds_high = paths
                    anchor_low = anchor_high = value
                    mid = False
                elif low_side:
                    seeds_low, anchor_low = paths, value
                else:
                    seeds_high, anchor_high = paths, value
        rows = [rows_by_index[i] for i in range(len(values))]
    else:
        items = [(apply_sweep(params, name, v), bvp_check, bvp_tol)
                 for v in values]
        rows = [r for r, _ in _map(_instanton_point_star, items, workers)]
    for v, row in zip(values, rows):
        row["sweep_value"] = float(v)
        for tag, omega in (("bd", omega_bd), ("db", omega_db)):
            iS = row[f"iS_{tag}"]
            row[f"rate_{tag}"] = omega * math.exp(iS) if math.isfinite(iS) else math.nan
    return rows


# ----------------------------------------------------------------------
# comparison of the two rate pipelines
# ----------------------------------------------------------------------

def rate_crossing(values, rate_bd, rate_db):
    """Sweep value where the two rates cross (linear interpolation in log)."""
    v = np.asarray(values, float)
    with np.errstate(divide="ignore", invalid="ignore"):
        diff = np.log(np.asarray(rate_bd, float)) - np.log(np.asarray(rate_db, float))
    ok = np.isfinite(diff)
    v, diff = v[ok], diff[ok]
    for i in range(len(diff) - 1):
        if diff[i] == 0.0:
            return float(v[i])
        if diff[i] * diff[i + 1] < 0:
            w = diff[i] / (diff[i] - diff[i + 1])
            return float(v[i] + w * (v[i + 1] - v[i]))
    return math.nan


def amplitude_jump(values, amplitude):
    """Sweep value of the largest amplitude change between neighbours."""
    v = np.asarray(values, float)
    a = np.asarray(amplitude, float)
    ok = np.isfinite(a)
    v, a = v[ok], a[ok]
    if len(a) < 2:
        return math.nan
    i = int(np.argmax(np.abs(np.diff(a))))
    return float(0.5 * (v[i] + v[i + 1]))


def compare_methods(params: KerrParams, name: str, values, dim=None,
                    psd_tol: float = 1e-8, bvp_check: bool = True,
                    bvp_tol: float = 1e-8, workers: int = 1):
    """Joint sweep + attempt-frequency fit + crossing/jump locations."""
    liou = liouvillian_sweep(params, name, values, dim=dim, psd_tol=psd_tol,
                             workers=workers)
    kel = instanton_sweep(params, name, values, bvp_check=bvp_check,
                          bvp_tol=bvp_tol, workers=workers)
    fit = instanton.fit_attempt_frequencies(
        [r["sweep_value"] for r in kel],
        [r["iS_bd"] for r in kel],
        [r["iS_db"] for r in kel],
        [r["sweep_value"] for r in liou],
        [r["gamma_bd"] for r in liou],
        [r["gamma_db"] for r in liou])
    joined = []
    liou_by = {r["sweep_value"]: r for r in liou}
    for r in kel:
        lr = liou_by.get(r["sweep_value"], {})
        row = dict(r)
        row.update({k: lr.get(k, math.nan) for k in
                    ("gamma_ad", "p_b", "p_d", "gamma_bd", "gamma_db",
                     "amplitude", "dim")})
        row["rate_bd_fit"] = (fit.omega_bd * math.exp(r["iS_bd"])
                              if math.isfinite(r["iS_bd"]) else math.nan)
        row["rate_db_fit"] = (fit.omega_db * math.exp(r["iS_db"])
                              if math.isfinite(r["iS_db"]) else math.nan)
        joined.append(row)
    summary = {
        "omega_bd": fit.omega_bd, "omega_db": fit.omega_db,
        "rms_log10_bd": fit.rms_log10_bd, "rms_log10_db": fit.rms_log10_db,
        "n_fit_points": fit.n_points,
        "crossing_liouvillian": rate_crossing(
            [r["sweep_value"] for r in liou],
            [r["gamma_bd"] for r in liou], [r["gamma_db"] for r in liou]),
        "crossing_keldysh_fit": rate_crossing(
            [r["sweep_value"] for r in joined],
            [r["rate_bd_fit"] for r in joined],
            [r["rate_db_fit"] for r in joined]),
        "amplitude_jump": amplitude_jump(
            [r["sweep_value"] for r in liou],
            [r["amplitude"] for r in liou]),
    }
    return joined, summary


def _continue_single(params, name, from_value, to_value, seed, origin,
                     depth: int = 4, endpoint_tol: float = 1e-6):
    """Single-origin analogue of _continue_paths."""
    p_to = apply_sweep(params, name, to_value)
    if from_value is None or seed is None:
        try:
            return instanton.escape_path(p_to, origin,
                                         endpoint_tol=endpoint_tol)
        except KerrSwitchError:
            return None
    try:
        return instanton.escape_path(p_to, origin, seeds=seed,
                                     endpoint_tol=endpoint_tol,
                                     fresh_fallback=False)
    except KerrSwitchError:
        pass
    if depth > 0:
        mid = 0.5 * (from_value + to_value)
        seed_mid = _continue_single(params, name, from_value, mid, seed,
                                    origin, depth - 1, endpoint_tol)
        if seed_mid is not None:
            out = _continue_single(params, name, mid, to_value, seed_mid,
                                   origin, depth - 1, endpoint_tol)
            if out is not None:
                return out
    if depth == 4:  # reported point: last resort, fresh shooting
        try:
            return instanton.escape_path(p_to, origin,
                                         endpoint_tol=endpoint_tol)
        except KerrSwitchError:
            return None
    return None


def barrier_sweep(params: KerrParams, kappa_values, lam: float | None = None,
                  workers: int = 1, progress=None,
                  endpoint_tol: float = 1e-4):
    """Barrier magnitudes |R| = lam |iS| along a kappa sweep.

    Each escape direction is continued from the window edge where its
    barrier vanishes (bright from high kappa, dim from low kappa), because
    that is where its orbit is short enough for fresh shooting.
    """
    if lam is None:
        lam = params.lam
    values = list(kappa_values)
    order = np.argsort(values)
    rows = {i: {"delta": params.delta, "chi": params.chi,
                "epsilon": params.epsilon, "kappa": float(values[i]),
                "sweep_value": float(values[i]), "iS_bd": math.nan,
                "iS_db": math.nan, "note": "", "lam": lam}
            for i in range(len(values))}
    chains = {"stable_dim": ("db", [int(i) for i in order]),
              "stable_bright": ("bd", [int(i) for i in order[::-1]])}
    for origin, (tag, idx_order) in chains.items():
        seed = None
        anchor = None
        for idx in idx_order:
            v = values[idx]
            path = _continue_single(params, "kappa", anchor, v, seed, origin,
                                    endpoint_tol=endpoint_tol)
            if path is None:
                rows[idx]["note"] += f"{origin}: no path; "
                continue
            rows[idx][f"iS_{tag}"] = path.action
            seed, anchor = path, v
            if progress is not None:
                progress(origin, v, path.action)
    out = [rows[i] for i in range(len(values))]
    for row in out:
        for tag in ("bd", "db"):
            iS = row[f"iS_{tag}"]
            row[f"R_{tag}"] = lam * iS if math.isfinite(iS) else math.nan
            row[f"absR_{tag}"] = abs(row[f"R_{tag}"]) if math.isfinite(iS) else math.nan
    return out


def fixed_point_count(params: KerrParams) -> int:
    return len(classical_fixed_points(params))
