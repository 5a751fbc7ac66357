"""Run configuration: TOML file + command-line overrides."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .errors import ConfigError
from .params import DuffingParams, KerrParams

METHODS = ("fixed-points", "boundary", "instanton", "liouvillian",
           "trajectory", "compare", "wigner")
SWEEPABLE = ("delta", "epsilon", "kappa", "chi")


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    start: float
    stop: float
    count: int
    spacing: str = "linear"

    def __post_init__(self):
        if self.parameter not in SWEEPABLE:
            raise ConfigError(f"sweep parameter must be one of {SWEEPABLE}")
        if self.count < 1:
            raise ConfigError("sweep count must be >= 1")
        if self.spacing not in ("linear", "log"):
            raise ConfigError("sweep spacing must be 'linear' or 'log'")


@dataclass(frozen=True)
class NumericOptions:
    dim: int | None = None
    psd_tol: float = 1e-8
    bvp_tol: float = 1e-8
    endpoint_tol: float = 1e-6
    delta_offset: float = 1e-5
    bvp_check: bool = True
    dt: float = 1e-3
    duration: float = 2000.0
    seed: int = 1
    n_traj: int = 1
    record_stride: int = 10
    burn_in: float = 20.0
    workers: int = 1
    grid_points: int = 101
    grid_halfwidth: float | None = None


@dataclass(frozen=True)
class RunConfig:
    method: str
    params: KerrParams
    sweep: SweepSpec | None = None
    numerics: NumericOptions = field(default_factory=NumericOptions)
    kappa_convention: str = "amplitude"
    absolute_units: bool = False
    output_prefix: str = "out"

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(f"method must be one of {METHODS}")
        if self.kappa_convention not in ("amplitude", "half"):
            raise ConfigError("kappa_convention must be 'amplitude' or 'half'")

    def effective_params(self) -> KerrParams:
        """Parameters after unit normalization and convention switches.

        Without ``absolute_units``, all rates are interpreted in units of
        kappa and rescaled so kappa = 1.  The 'half' convention halves the
        amplitude decay rate (Lindblad prefactor kappa/2 instead of kappa).
        """
        p = self.params
        if not self.absolute_units and p.kappa > 0:
            k = p.kappa
            p = KerrParams(delta=p.delta / k, chi=p.chi / k,
                           epsilon=p.epsilon / k, kappa=1.0)
        if self.kappa_convention == "half":
            p = p.with_kappa(p.kappa / 2.0)
        return p

    def to_dict(self) -> dict:
        d = {
            "method": self.method,
            "params": self.params.to_dict(),
            "numerics": asdict(self.numerics),
            "kappa_convention": self.kappa_convention,
            "absolute_units": self.absolute_units,
            "output_prefix": self.output_prefix,
        }
        if self.sweep is not None:
            d["sweep"] = asdict(self.sweep)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        try:
            params = KerrParams.from_dict(d["params"])
        except KeyError as exc:
            raise ConfigError(f"missing params field: {exc}") from exc
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        sweep = None
        if "sweep" in d and d["sweep"]:
            try:
                sweep = SweepSpec(**d["sweep"])
            except TypeError as exc:
                raise ConfigError(f"bad sweep section: {exc}") from exc
        num = NumericOptions()
        if "numerics" in d and d["numerics"]:
            try:
                num = NumericOptions(**d["numerics"])
            except TypeError as exc:
                raise ConfigError(f"bad numerics section: {exc}") from exc
        try:
            return cls(method=d["method"], params=params, sweep=sweep,
                       numerics=num,
                       kappa_convention=d.get("kappa_convention", "amplitude"),
                       absolute_units=bool(d.get("absolute_units", False)),
                       output_prefix=d.get("output_prefix", "out"))
        except KeyError as exc:
            raise ConfigError(f"missing field: {exc}") from exc


def params_from_table(table: dict) -> KerrParams:
    """Kerr parameters, possibly via the Duffing mapping."""
    if {"omega_0", "omega_F", "gamma_duffing", "A"} <= set(table):
        from .model import duffing_to_kerr
        duff = DuffingParams(omega_0=table["omega_0"], omega_F=table["omega_F"],
                             gamma_duffing=table["gamma_duffing"], A=table["A"],
                             hbar=table.get("hbar", 1.0))
        kerr, _ = duffing_to_kerr(duff)
        if "kappa" in table:
            kerr = kerr.with_kappa(table["kappa"])
        return kerr
    try:
        return KerrParams(delta=table["delta"], chi=table["chi"],
                          epsilon=table["epsilon"], kappa=table["kappa"])
    except KeyError as exc:
        raise ConfigError(f"params table missing {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: str, method: str, overrides: dict | None = None) -> RunConfig:
    """Parse a TOML config file and apply flat CLI overrides on top."""
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config parse error: {exc}") from exc
    return build_config(data, method, overrides)


def build_config(data: dict, method: str, overrides: dict | None = None) -> RunConfig:
    overrides = dict(overrides or {})
    ptab = dict(data.get("params", {}))
    for key in ("delta", "chi", "epsilon", "kappa"):
        if overrides.get(key) is not None:
            ptab[key] = overrides.pop(key)
    if not ptab:
        raise ConfigError("no [params] section and no parameter flags")
    params = params_from_table(ptab)

    stab = dict(data.get("sweep", {}))
    if overrides.get("sweep") is not None:
        stab = overrides.pop("sweep")
    sweep = SweepSpec(**stab) if stab else None

    ntab = dict(data.get("numerics", {}))
    for key in ("dim", "seed", "workers", "dt", "duration", "n_traj",
                "record_stride", "grid_points", "bvp_check"):
        if overrides.get(key) is not None:
            ntab[key] = overrides.pop(key)
    try:
        num = NumericOptions(**ntab)
    except TypeError as exc:
        raise ConfigError(f"bad numerics option: {exc}") from exc

    out = dict(data.get("output", {}))
    prefix = overrides.pop("prefix", None) or out.get("prefix", "out")
    kconv = overrides.pop("kappa_convention", None) \
        or data.get("kappa_convention", "amplitude")
    absu = overrides.pop("absolute_units", None)
    if absu is None:
        absu = bool(data.get("absolute_units", False))
    overrides = {k: v for k, v in overrides.items() if v is not None}
    if overrides:
        raise ConfigError(f"unrecognized overrides: {sorted(overrides)}")
    return RunConfig(method=method, params=params, sweep=sweep, numerics=num,
                     kappa_convention=kconv, absolute_units=absu,
                     output_prefix=prefix)
