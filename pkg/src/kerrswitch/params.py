"""Model parameter containers.

All rates are plain floats in a common unit system chosen by the caller
(the CLI defaults to units of the damping rate kappa).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace


def _require_finite(name, value):
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class KerrParams:
    """Rotating-frame parameters of the driven-dissipative Kerr oscillator.

    Attributes
    ----------
    delta : float
        Detuning between oscillator and drive.
    chi : float
        Kerr nonlinearity.
    epsilon : float
        Drive amplitude.
    kappa : float
        Amplitude damping rate (>= 0).
    """

    delta: float
    chi: float
    epsilon: float
    kappa: float

    def __post_init__(self):
        for name in ("delta", "chi", "epsilon", "kappa"):
            value = float(getattr(self, name))
            _require_finite(name, value)
            object.__setattr__(self, name, value)
        if self.kappa < 0:
            raise ValueError(f"kappa must be >= 0, got {self.kappa}")

    def with_epsilon(self, epsilon: float) -> "KerrParams":
        return replace(self, epsilon=epsilon)

    def with_kappa(self, kappa: float) -> "KerrParams":
        return replace(self, kappa=kappa)

    def flipped_drive(self) -> "KerrParams":
        """Same model with the drive sign reversed (a parity-equivalent system)."""
        return replace(self, epsilon=-self.epsilon)

    def to_dict(self) -> dict:
        return {"delta": self.delta, "chi": self.chi,
                "epsilon": self.epsilon, "kappa": self.kappa}

    @classmethod
    def from_dict(cls, d: dict) -> "KerrParams":
        return cls(delta=d["delta"], chi=d["chi"],
                   epsilon=d["epsilon"], kappa=d["kappa"])

    @property
    def lam(self) -> float:
        """Effective quantum scale |chi/delta| (hbar = 1)."""
        if self.delta == 0:
            raise ValueError("lambda undefined at delta = 0")
        return abs(self.chi / self.delta)


@dataclass(frozen=True)
class DuffingParams:
    """Lab-frame driven Duffing oscillator (unit mass).

    H(t) = p^2/2 + omega_0^2 q^2/2 + gamma_duffing q^4/4 - q A cos(omega_F t)
    """

    omega_0: float
    omega_F: float
    gamma_duffing: float
    A: float
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("omega_0", "omega_F", "gamma_duffing", "A", "hbar"):
            value = float(getattr(self, name))
            _require_finite(name, value)
            object.__setattr__(self, name, value)
        if self.omega_F == self.omega_0:
            raise ValueError("resonant drive (omega_F == omega_0): rotating-frame mapping is singular")
        if self.omega_F <= 0:
            raise ValueError("omega_F must be positive")
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")

    @property
    def delta_omega(self) -> float:
        return self.omega_F - self.omega_0

    def to_dict(self) -> dict:
        return {"omega_0": self.omega_0, "omega_F": self.omega_F,
                "gamma_duffing": self.gamma_duffing, "A": self.A, "hbar": self.hbar}

    @classmethod
    def from_dict(cls, d: dict) -> "DuffingParams":
        return cls(omega_0=d["omega_0"], omega_F=d["omega_F"],
                   gamma_duffing=d["gamma_duffing"], A=d["A"],
                   hbar=d.get("hbar", 1.0))
