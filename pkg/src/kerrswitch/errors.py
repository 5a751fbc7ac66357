"""Exception types shared across the package."""


class KerrSwitchError(Exception):
    """Base class for all package errors."""


class MonostableRegime(KerrSwitchError):
    """Only one classical fixed point exists; escape-path analysis does not apply."""


class PathDidNotConverge(KerrSwitchError):
    """Backward shooting did not come close enough to a stable fixed point."""

    def __init__(self, msg, diagnostics=None):
        super().__init__(msg)
        self.diagnostics = diagnostics or {}


class BothPathsSameTarget(KerrSwitchError):
    """Both launch signs relaxed to the same stable point."""


class StiffnessFailure(KerrSwitchError):
    """Escape-direction rate is too slow relative to the in-plane rate."""


class BvpNoConvergence(KerrSwitchError):
    """Collocation refinement failed to reach the requested residual."""

    def __init__(self, msg, max_residual=None):
        super().__init__(msg)
        self.max_residual = max_residual


class DegenerateKernel(KerrSwitchError):
    """More than one Liouvillian eigenvalue numerically at zero."""


class OscillatoryMode(KerrSwitchError):
    """Slowest decaying mode has a significant oscillation frequency."""


class DegenerateGap(KerrSwitchError):
    """Slowest decay rate is not separated from the rest of the spectrum."""


class NoSignChange(KerrSwitchError):
    """Positivity scan found no crossing; no metastable decomposition."""


class StepTooLarge(KerrSwitchError):
    """Stochastic integrator norm drift exceeded the per-step bound."""


class DegenerateReferences(KerrSwitchError):
    """Bright/dim reference amplitudes are too close to classify a trajectory."""


class InsufficientOverlap(KerrSwitchError):
    """Fewer than three common sweep points between two rate series."""


class ConfigError(KerrSwitchError):
    """Run configuration failed to parse or validate."""


class TruncationWarning(UserWarning):
    """Fock-space truncation may be too small for the requested state."""


class NearBifurcationWarning(UserWarning):
    """Parameters lie close to a spinodal; escape-path numerics become stiff."""


class OverlapWarning(UserWarning):
    """Extracted metastable states overlap more than the two-state picture assumes."""
