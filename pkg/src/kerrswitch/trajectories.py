"""Heterodyne stochastic Schrodinger trajectories and dwell statistics.

Unraveling: normalized quantum-state diffusion with jump operator
L = sqrt(2 kappa) a, whose ensemble average reproduces the Lindblad
dissipator of :mod:`kerrswitch.fock`.  The complex noise increment has
independent real and imaginary parts of variance dt/2 each.

The integrator is Euler-Maruyama in the interaction picture of the diagonal
part: the Kerr + detuning + damping diagonal is applied as an exact
exponential each step.  A plain explicit Euler step is unstable once
|delta n + chi n(n-1)| dt approaches one at the top of the truncated space,
which the exact diagonal propagator avoids at no accuracy cost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateReferences, StepTooLarge
from .params import KerrParams

NORM_DRIFT_MAX = 1e-3


@dataclass(frozen=True)
class TrajectoryConfig:
    dt: float
    duration: float
    seed: int
    record_stride: int = 10

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.duration < 100 * self.dt:
            raise ValueError("duration must cover at least 100 steps")
        if self.record_stride < 1:
            raise ValueError("record_stride must be >= 1")

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.dt))


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    amplitude: np.ndarray
    phase: np.ndarray
    final_state: np.ndarray
    norm_drift_max: float
    config: TrajectoryConfig


class _Stepper:
    """Precomputed operators for one (params, dim, dt) combination."""

    def __init__(self, params: KerrParams, dim: int, dt: float):
        n = np.arange(float(dim))
        self.diag_prop = np.exp((-1j * (params.delta * n + params.chi * n * (n - 1.0))
                                 - params.kappa * n) * dt)
        self.sub = np.sqrt(np.arange(1.0, dim))  # a|n> = sqrt(n)|n-1>
        self.eps = params.epsilon
        self.sqrt2k = math.sqrt(2.0 * params.kappa)
        self.dt = dt
        self.dim = dim

    def apply_a(self, psi):
        out = np.zeros_like(psi)
        out[:-1] = self.sub * psi[1:]
        return out

    def apply_adag(self, psi):
        out = np.zeros_like(psi)
        out[1:] = self.sub * psi[:-1]
        return out

    def step(self, psi, noise):
        """One update; noise is the complex Wiener increment for this step."""
        apsi = self.apply_a(psi)
        Lpsi = self.sqrt2k * apsi
        lexp = np.vdot(psi, Lpsi)
        drive = self.eps * (self.apply_adag(psi) - apsi)
        dpsi = (drive + np.conj(lexp) * Lpsi - 0.5 * abs(lexp) ** 2 * psi) * self.dt \
            + (Lpsi - lexp * psi) * noise
        out = self.diag_prop * (psi + dpsi)
        norm = np.linalg.norm(out)
        drift = abs(norm - 1.0)
        # pathwise norm fluctuation of the normalized diffusion is
        # ~ Var(L) dt per step even for a correct integrator; only drift
        # beyond that scale signals a too-large step
        var_l = float(np.real(np.vdot(Lpsi, Lpsi)) - abs(lexp) ** 2)
        if drift > max(NORM_DRIFT_MAX, 20.0 * var_l * self.dt):
            raise StepTooLarge(f"norm drift {drift:.2e} in one step; reduce dt")
        return out / norm, drift


def heterodyne_step(state: np.ndarray, params: KerrParams, dt: float,
                    noise: complex) -> np.ndarray:
    """Single normalized diffusion update (convenience wrapper)."""
    stepper = _Stepper(params, len(state), dt)
    out, _ = stepper.step(np.asarray(state, dtype=complex), noise)
    return out


def draw_noise(rng: np.random.Generator, dt: float, size=None):
    """Complex Wiener increments, E|dxi|^2 = dt."""
    s = math.sqrt(dt / 2.0)
    return s * (rng.standard_normal(size) + 1j * rng.standard_normal(size))


def simulate(params: KerrParams, config: TrajectoryConfig, dim: int,
             initial_state: np.ndarray | None = None) -> Trajectory:
    """Run one trajectory; reproducible from (seed, config, params, dim)."""
    rng = np.random.default_rng(config.seed)
    stepper = _Stepper(params, dim, config.dt)
    if initial_state is None:
        psi = np.zeros(dim, dtype=complex)
        psi[0] = 1.0
    else:
        psi = np.asarray(initial_state, dtype=complex).copy()
        psi /= np.linalg.norm(psi)
        if len(psi) != dim:
            raise ValueError("initial_state dimension mismatch")
    sub = stepper.sub
    times, amps, phases = [], [], []
    drift_max = 0.0
    for step in range(config.n_steps):
        if step % config.record_stride == 0:
            a_exp = np.sum(np.conj(psi[:-1]) * sub * psi[1:])
            times.append(step * config.dt)
            amps.append(abs(a_exp))
            phases.append(np.angle(a_exp))
        noise = draw_noise(rng, config.dt)
        psi, drift = stepper.step(psi, noise)
        drift_max = max(drift_max, drift)
    return Trajectory(times=np.asarray(times), amplitude=np.asarray(amps),
                      phase=np.asarray(phases), final_state=psi,
                      norm_drift_max=drift_max, config=config)


# ----------------------------------------------------------------------
# telegraph analysis
# ----------------------------------------------------------------------

BRIGHT, DIM, TRANSIT = "bright", "dim", "transit"


def classify_states(traj_amplitude, times, ref_bright: float, ref_dim: float,
                    kappa: float = 1.0, hi_frac: float = 0.8,
                    lo_frac: float = 0.2, min_dwell_factor: float = 2.0):
    """Hysteresis labelling of an amplitude series.

    Enter bright above ref_dim + hi_frac (ref_bright - ref_dim), enter dim
    below the lo_frac threshold, keep the previous label in between; dwells
    shorter than min_dwell_factor / kappa are merged into their surroundings.
    """
    amp = np.asarray(traj_amplitude, dtype=float)
    t = np.asarray(times, dtype=float)
    if ref_bright <= ref_dim:
        raise DegenerateReferences("ref_bright must exceed ref_dim")
    sep = ref_bright - ref_dim
    if sep < 0.05 * ref_bright:
        raise DegenerateReferences(
            f"reference separation {sep:.3g} below 5% of ref_bright")
    hi = ref_dim + hi_frac * sep
    lo = ref_dim + lo_frac * sep
    labels = np.empty(len(amp), dtype=object)
    current = TRANSIT
    for i, x in enumerate(amp):
        if x > hi:
            current = BRIGHT
        elif x < lo:
            current = DIM
        labels[i] = current

    # merge dwells shorter than the filter into the previous state
    min_dwell = min_dwell_factor / kappa
    runs = []
    start = 0
    for i in range(1, len(labels) + 1):
        if i == len(labels) or labels[i] != labels[start]:
            runs.append([labels[start], start, i])
            start = i
    changed = True
    while changed and len(runs) > 1:
        changed = False
        for j, (lab, i0, i1) in enumerate(runs):
            if lab == TRANSIT:
                continue
            t0 = t[i0]
            t1 = t[i1] if i1 < len(t) else t[-1] + (t[-1] - t[-2] if len(t) > 1 else 0.0)
            if t1 - t0 < min_dwell and (j > 0 or j + 1 < len(runs)):
                neighbor = runs[j - 1][0] if j > 0 else runs[j + 1][0]
                runs[j][0] = neighbor
                merged = []
                for lab2, a0, a1 in runs:
                    if merged and merged[-1][0] == lab2:
                        merged[-1][2] = a1
                    else:
                        merged.append([lab2, a0, a1])
                runs = merged
                changed = True
                break
    for lab, i0, i1 in runs:
        labels[i0:i1] = lab
    return labels


@dataclass(frozen=True)
class DwellStatistics:
    occupation_b: float
    occupation_d: float
    occupation_transit: float
    switch_events: list
    rate_bd: float | None
    rate_db: float | None
    rate_bd_stderr: float | None
    rate_db_stderr: float | None
    time_in_bright: float
    time_in_dim: float
    sensitivity: dict = field(default_factory=dict)


def dwell_statistics(labels, times) -> DwellStatistics:
    """Occupations, switch events and Poisson rate estimates."""
    labels = np.asarray(labels, dtype=object)
    t = np.asarray(times, dtype=float)
    if len(t) < 2:
        raise ValueError("need at least two samples")
    dt_samples = np.empty(len(t))
    dt_samples[:-1] = np.diff(t)
    dt_samples[-1] = dt_samples[-2]
    total = dt_samples.sum()
    tb = dt_samples[labels == BRIGHT].sum()
    td = dt_samples[labels == DIM].sum()
    tt = total - tb - td
    events = []
    for i in range(1, len(labels)):
        if labels[i] != labels[i - 1] and labels[i] != TRANSIT \
                and labels[i - 1] != TRANSIT:
            direction = "bright->dim" if labels[i] == DIM else "dim->bright"
            events.append((float(t[i]), direction))
    n_bd = sum(1 for _, d in events if d == "bright->dim")
    n_db = len(events) - n_bd

    def rate(n, t_src):
        if n == 0 or t_src <= 0:
            return None, None
        return n / t_src, math.sqrt(n) / t_src

    rate_bd, err_bd = rate(n_bd, tb)
    rate_db, err_db = rate(n_db, td)
    return DwellStatistics(
        occupation_b=tb / total, occupation_d=td / total,
        occupation_transit=tt / total, switch_events=events,
        rate_bd=rate_bd, rate_db=rate_db,
        rate_bd_stderr=err_bd, rate_db_stderr=err_db,
        time_in_bright=tb, time_in_dim=td)


def analyze_trajectory(traj: Trajectory, ref_bright: float, ref_dim: float,
                       kappa: float = 1.0, burn_in: float = 0.0) -> DwellStatistics:
    """Classify + summarize, with threshold-sensitivity occupations attached."""
    keep = traj.times >= burn_in
    amp, t = traj.amplitude[keep], traj.times[keep]
    labels = classify_states(amp, t, ref_bright, ref_dim, kappa=kappa)
    stats = dwell_statistics(labels, t)
    sens = {}
    for tag, hi, lo in (("70/30", 0.7, 0.3), ("90/10", 0.9, 0.1)):
        lab2 = classify_states(amp, t, ref_bright, ref_dim, kappa=kappa,
                               hi_frac=hi, lo_frac=lo)
        s2 = dwell_statistics(lab2, t)
        sens[tag] = {"occupation_b": s2.occupation_b,
                     "occupation_d": s2.occupation_d}
    return DwellStatistics(
        occupation_b=stats.occupation_b, occupation_d=stats.occupation_d,
        occupation_transit=stats.occupation_transit,
        switch_events=stats.switch_events, rate_bd=stats.rate_bd,
        rate_db=stats.rate_db, rate_bd_stderr=stats.rate_bd_stderr,
        rate_db_stderr=stats.rate_db_stderr,
        time_in_bright=stats.time_in_bright, time_in_dim=stats.time_in_dim,
        sensitivity=sens)
