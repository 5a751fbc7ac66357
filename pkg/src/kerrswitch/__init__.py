"""Switching rates of the driven-dissipative Kerr oscillator.

Three independent routes to the metastable switching rates:

- saddle-point escape paths in the doubled phase space and their actions
  (:mod:`kerrswitch.keldysh`, :mod:`kerrswitch.instanton`);
- exact Liouvillian spectral decomposition with metastable-state extraction
  (:mod:`kerrswitch.fock`);
- heterodyne stochastic trajectories (:mod:`kerrswitch.trajectories`).
"""

from .params import DuffingParams, KerrParams
from .model import (ClassicalFixedPoint, bistability_boundary,
                    classical_fixed_points, duffing_to_kerr)
from .keldysh import (FixedPoint4D, PhasePoint, aux_hamiltonian,
                      classify_fixed_points, eom_rhs, flow_hamiltonian, jacobian)
from .instanton import (InstantonPath, SwitchingRateEstimate, barrier_height,
                        bounce_path, fit_attempt_frequencies, path_action,
                        refine_path_bvp, switching_rate)
from .fock import (MetastableDecomposition, asymptotic_mode, build_hamiltonian,
                   cavity_amplitude, choose_truncation, extract_metastable,
                   liouvillian, steady_state, switching_rates_from_liouvillian)
from .wigner import wigner
from .trajectories import (DwellStatistics, Trajectory, TrajectoryConfig,
                           analyze_trajectory, classify_states,
                           dwell_statistics, heterodyne_step, simulate)

__version__ = "0.1.0"

__all__ = [
    "KerrParams", "DuffingParams", "ClassicalFixedPoint",
    "classical_fixed_points", "bistability_boundary", "duffing_to_kerr",
    "PhasePoint", "FixedPoint4D", "aux_hamiltonian", "flow_hamiltonian",
    "eom_rhs", "jacobian", "classify_fixed_points",
    "InstantonPath", "SwitchingRateEstimate", "bounce_path", "refine_path_bvp",
    "path_action", "switching_rate", "barrier_height", "fit_attempt_frequencies",
    "MetastableDecomposition", "build_hamiltonian", "liouvillian",
    "steady_state", "asymptotic_mode", "extract_metastable", "cavity_amplitude",
    "choose_truncation", "switching_rates_from_liouvillian", "wigner",
    "TrajectoryConfig", "Trajectory", "DwellStatistics", "heterodyne_step",
    "simulate", "classify_states", "dwell_statistics", "analyze_trajectory",
]
