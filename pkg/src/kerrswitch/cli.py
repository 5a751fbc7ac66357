"""Command-line interface.

Subcommands: fixed-points, boundary, instanton, liouvillian, trajectory,
compare, wigner.  Parameters come from a TOML config file and/or flags
(flags win).  All rates are in units of kappa unless --absolute-units.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 monostable regime for an escape-path request.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import fock, instanton, sweeps, trajectories
from .config import ConfigError, RunConfig, SweepSpec, build_config, load_config
from .csvio import write_csv, write_json, write_wigner_binary
from .errors import KerrSwitchError, MonostableRegime
from .keldysh import flow_hamiltonian
from .model import bistability_boundary, classical_fixed_points
from .wigner import wigner


def _parse_sweep(text: str) -> dict:
    parts = text.split(":")
    if len(parts) not in (4, 5):
        raise argparse.ArgumentTypeError(
            "sweep must be param:start:stop:count[:spacing]")
    spec = {"parameter": parts[0], "start": float(parts[1]),
            "stop": float(parts[2]), "count": int(parts[3])}
    if len(parts) == 5:
        spec["spacing"] = parts[4]
    return spec


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="TOML config file")
    for name in ("delta", "chi", "epsilon", "kappa"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--dim", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--dt", type=float)
    p.add_argument("--duration", type=float)
    p.add_argument("--n-traj", dest="n_traj", type=int)
    p.add_argument("--record-stride", dest="record_stride", type=int)
    p.add_argument("--grid-points", dest="grid_points", type=int)
    p.add_argument("--sweep", type=_parse_sweep,
                   help="param:start:stop:count[:linear|log]")
    p.add_argument("--prefix")
    p.add_argument("--absolute-units", dest="absolute_units",
                   action="store_const", const=True, default=None)
    p.add_argument("--kappa-convention", dest="kappa_convention",
                   choices=("amplitude", "half"))
    p.add_argument("--no-bvp-check", dest="bvp_check", action="store_const",
                   const=False, default=None)
    p.add_argument("--no-timestamp", action="store_true",
                   help="omit the timestamp metadata line")


def _config_from_args(args, method: str) -> RunConfig:
    overrides = {k: getattr(args, k, None) for k in
                 ("delta", "chi", "epsilon", "kappa", "dim", "seed", "workers",
                  "dt", "duration", "n_traj", "record_stride", "grid_points",
                  "sweep", "prefix", "absolute_units", "kappa_convention",
                  "bvp_check")}
    if args.config:
        return load_config(args.config, method, overrides)
    return build_config({}, method, overrides)


def _sweep_values(cfg: RunConfig):
    if cfg.sweep is None:
        raise ConfigError("this command needs a sweep (--sweep or [sweep] table)")
    s = cfg.sweep
    return sweeps.sweep_values(s.start, s.stop, s.count, s.spacing)


def _run_fixed_points(cfg: RunConfig, ts: bool):
    params = cfg.effective_params()
    pts = classical_fixed_points(params)
    rows = [{"x_c": p.x_c, "p_c": p.p_c, "n": p.n, "stability": p.stability,
             "residual": p.residual, "near_bifurcation": p.near_bifurcation}
            for p in pts]
    out = f"{cfg.output_prefix}_fixed_points.csv"
    write_csv(out, "fixed_points", rows, cfg.to_json(), timestamp=ts)
    return [out]


def _run_boundary(cfg: RunConfig, ts: bool):
    params = cfg.effective_params()
    values = _sweep_values(cfg)
    if cfg.sweep.parameter != "delta":
        raise ConfigError("boundary sweeps run over delta")
    rows = []
    for entry in bistability_boundary(params.chi, params.kappa, values):
        rows.append({"delta": entry["delta"],
                     "epsilon_lower": entry["epsilon_lower"],
                     "epsilon_upper": entry["epsilon_upper"],
                     "bistable_flag": entry["bistable"]})
    out = f"{cfg.output_prefix}_boundary.csv"
    write_csv(out, "boundary", rows, cfg.to_json(), timestamp=ts)
    return [out]


def _path_rows(path, params):
    H = flow_hamiltonian(path.points.T, params)
    return [{"t": t, "x_c": p[0], "p_c": p[1], "x_q": p[2], "p_q": p[3], "H": h}
            for t, p, h in zip(path.times, path.points, H)]


def _run_instanton(cfg: RunConfig, ts: bool):
    params = cfg.effective_params()
    num = cfg.numerics
    if cfg.sweep is not None:
        values = _sweep_values(cfg)
        rows = sweeps.instanton_sweep(params, cfg.sweep.parameter, values,
                                      bvp_check=num.bvp_check,
                                      bvp_tol=num.bvp_tol, workers=num.workers)
        out = f"{cfg.output_prefix}_instanton_sweep.csv"
        write_csv(out, "instanton_sweep", rows, cfg.to_json(), timestamp=ts)
        return [out]
    pb, pd = instanton.bounce_path(params, delta_offset=num.delta_offset,
                                   endpoint_tol=num.endpoint_tol)
    outputs = []
    summary = {"actions": {"bright_to_unstable": pb.action,
                           "dim_to_unstable": pd.action}}
    for tag, path in (("bright", pb), ("dim", pd)):
        out = f"{cfg.output_prefix}_path_{tag}.csv"
        write_csv(out, "path", _path_rows(path, params), cfg.to_json(),
                  extra={"diagnostics": path.diagnostics}, timestamp=ts)
        outputs.append(out)
    if num.bvp_check:
        rb = instanton.refine_path_bvp(pb, params, tol=num.bvp_tol)
        rd = instanton.refine_path_bvp(pd, params, tol=num.bvp_tol)
        summary["actions_bvp"] = {"bright_to_unstable": rb.action,
                                  "dim_to_unstable": rd.action}
        summary["relative_disagreement"] = {
            "bright": abs(pb.action - rb.action) / abs(rb.action),
            "dim": abs(pd.action - rd.action) / abs(rd.action)}
    out = f"{cfg.output_prefix}_instanton.json"
    write_json(out, summary, cfg.to_json())
    outputs.append(out)
    return outputs


def _run_liouvillian(cfg: RunConfig, ts: bool):
    params = cfg.effective_params()
    num = cfg.numerics
    if cfg.sweep is not None:
        values = _sweep_values(cfg)
        rows = sweeps.liouvillian_sweep(params, cfg.sweep.parameter, values,
                                        dim=num.dim, psd_tol=num.psd_tol,
                                        workers=num.workers)
        out = f"{cfg.output_prefix}_liouvillian_sweep.csv"
        write_csv(out, "liouvillian_sweep", rows, cfg.to_json(), timestamp=ts)
        return [out]
    dec = fock.switching_rates_from_liouvillian(params, dim=num.dim,
                                                psd_tol=num.psd_tol)
    out = f"{cfg.output_prefix}_liouvillian.json"
    write_json(out, {
        "gamma_ad": dec.gamma_ad, "p_b": dec.p_b, "p_d": dec.p_d,
        "gamma_bd": dec.gamma_bd, "gamma_db": dec.gamma_db,
        "f_b": dec.f_b, "f_d": dec.f_d, "overlap": dec.overlap,
        "amplitude": fock.cavity_amplitude(dec.rho_ss),
        "amplitude_bright": fock.cavity_amplitude(dec.rho_b),
        "amplitude_dim": fock.cavity_amplitude(dec.rho_d),
    }, cfg.to_json())
    return [out]


def _run_trajectory(cfg: RunConfig, ts: bool):
    params = cfg.effective_params()
    num = cfg.numerics
    dim = num.dim or fock.choose_truncation(params)
    try:
        dec = fock.switching_rates_from_liouvillian(params, dim=dim,
                                                    psd_tol=num.psd_tol)
        ref_b = fock.cavity_amplitude(dec.rho_b)
        ref_d = fock.cavity_amplitude(dec.rho_d)
        evals, evecs = np.linalg.eigh(dec.rho_d)
        psi0 = evecs[:, -1]
    except KerrSwitchError:
        pts = classical_fixed_points(params)
        amps = sorted(math.sqrt(p.n) for p in pts)
        ref_b, ref_d = amps[-1], amps[0]
        psi0 = None
    cfg_t = trajectories.TrajectoryConfig(dt=num.dt, duration=num.duration,
                                          seed=num.seed,
                                          record_stride=num.record_stride)
    outputs = []
    all_stats = []
    for i in range(num.n_traj):
        cfg_i = trajectories.TrajectoryConfig(dt=num.dt, duration=num.duration,
                                              seed=num.seed + i,
                                              record_stride=num.record_stride)
        traj = trajectories.simulate(params, cfg_i, dim, initial_state=psi0)
        stats = trajectories.analyze_trajectory(traj, ref_b, ref_d,
                                                kappa=params.kappa,
                                                burn_in=num.burn_in)
        keep = traj.times >= num.burn_in
        labels = trajectories.classify_states(traj.amplitude[keep],
                                              traj.times[keep], ref_b, ref_d,
                                              kappa=params.kappa)
        rows = [{"t": t, "amplitude": a, "phase": ph, "label": lab}
                for t, a, ph, lab in zip(traj.times[keep], traj.amplitude[keep],
                                         traj.phase[keep], labels)]
        out = f"{cfg.output_prefix}_traj{i}.csv"
        write_csv(out, "trajectory", rows, cfg.to_json(), timestamp=ts)
        outputs.append(out)
        all_stats.append({
            "seed": cfg_i.seed, "occupation_b": stats.occupation_b,
            "occupation_d": stats.occupation_d,
            "occupation_transit": stats.occupation_transit,
            "n_switches": len(stats.switch_events),
            "rate_bd": stats.rate_bd, "rate_db": stats.rate_db,
            "rate_bd_stderr": stats.rate_bd_stderr,
            "rate_db_stderr": stats.rate_db_stderr,
            "sensitivity": stats.sensitivity,
        })
    out = f"{cfg.output_prefix}_trajectory_stats.json"
    write_json(out, {"reference_amplitudes": {"bright": ref_b, "dim": ref_d},
                     "dim": dim, "trajectories": all_stats}, cfg.to_json())
    outputs.append(out)
    return outputs


def _run_compare(cfg: RunConfig, ts: bool):
    params = cfg.effective_params()
    num = cfg.numerics
    values = _sweep_values(cfg)
    joined, summary = sweeps.compare_methods(
        params, cfg.sweep.parameter, values, dim=num.dim, psd_tol=num.psd_tol,
        bvp_check=num.bvp_check, bvp_tol=num.bvp_tol, workers=num.workers)
    out_csv = f"{cfg.output_prefix}_compare.csv"
    write_csv(out_csv, "compare", joined, cfg.to_json(), timestamp=ts)
    out_json = f"{cfg.output_prefix}_compare.json"
    write_json(out_json, summary, cfg.to_json())
    return [out_csv, out_json]


def _run_wigner(cfg: RunConfig, ts: bool):
    params = cfg.effective_params()
    num = cfg.numerics
    dim = num.dim or fock.choose_truncation(params)
    L = fock.liouvillian(params, dim)
    rho = fock.steady_state(L)
    n_max = max(p.n for p in classical_fixed_points(params))
    half = num.grid_halfwidth or (math.sqrt(2.0) * (2.0 * math.sqrt(n_max) + 3.0))
    x = np.linspace(-half, half, num.grid_points)
    p = np.linspace(-half, half, num.grid_points)
    W = wigner(rho, x, p)
    rows = [{"x": xi, "p": pj, "W": W[i, j]}
            for i, xi in enumerate(x) for j, pj in enumerate(p)]
    out_csv = f"{cfg.output_prefix}_wigner.csv"
    write_csv(out_csv, "wigner", rows, cfg.to_json(), timestamp=ts)
    out_bin = f"{cfg.output_prefix}_wigner.wig"
    write_wigner_binary(out_bin, x, p, W)
    return [out_csv, out_bin]


_RUNNERS = {
    "fixed-points": _run_fixed_points,
    "boundary": _run_boundary,
    "instanton": _run_instanton,
    "liouvillian": _run_liouvillian,
    "trajectory": _run_trajectory,
    "compare": _run_compare,
    "wigner": _run_wigner,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="kerrswitch",
        description="Switching-rate toolkit for the driven-dissipative Kerr oscillator")
    subs = parser.add_subparsers(dest="command", required=True)
    for name in _RUNNERS:
        sp = subs.add_parser(name)
        _add_common(sp)
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args, args.command)
        outputs = _RUNNERS[args.command](cfg, ts=not args.no_timestamp)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except MonostableRegime as exc:
        print(f"monostable regime: {exc}", file=sys.stderr)
        return 4
    except KerrSwitchError as exc:
        print(f"numerical failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 3
    for out in outputs:
        print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
