"""Frozen figure presets: named bundles of run configurations.

Each preset regenerates one figure's data from scratch. Rates are quoted in
units of the mechanical linewidth (gamma = 1), so e.g. delta = 1000 means
a detuning of 10^3 mechanical linewidths. The two-panel presets (fig3, fig4b)
carry one RunConfig per curve; their rows share a single output CSV and are
distinguished by the scheme_or_config column.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .config import RunConfig, validate_config
from .errors import ConfigError

_TWO_PI = 2.0 * math.pi

# Pulsed-scheme time window: 69/16 drive periods covers the first four pulse
# times t_n = 2*pi*n/delta with margin so the n = 4 peak is interior.
_DELTA = 1000.0
_PERIOD = _TWO_PI / _DELTA
_T_MAX = (69.0 / 16.0) * _PERIOD
_DT = _PERIOD / 4096.0
_STRIDE = 8

# Pulse-train window for the adiabatic output mode: tau_n = 2*pi*n/delta,
# sampled on a coarse grid of 16 points per drive period.
_TAU_MAX_A = 3.5 * _PERIOD
_TAU_POINTS_A = 56
_TAU_MAX_B = 6.0 * _PERIOD
_TAU_POINTS_B = 96


def _log_grid(lo_exp: float, hi_exp: float, count: int) -> tuple[float, ...]:
    step = (hi_exp - lo_exp) / (count - 1)
    return tuple(10.0 ** (lo_exp + step * i) for i in range(count))


@dataclass(frozen=True)
class FigurePreset:
    """A named figure with the run configurations that produce its data."""

    name: str
    description: str
    configs: tuple[RunConfig, ...]


_FIG2A_SERIES = RunConfig(
    scheme="sm", regime="intracavity", mode="series",
    n_th=(10.0, 100.0, 1000.0, 10000.0), output="fig2a.csv",
    g1=4000.0, g2=4000.0, kappa1=10.0, kappa2=10.0, delta=_DELTA,
    t_max=_T_MAX, dt=_DT, sample_stride=_STRIDE,
)

_FIG2B_SERIES = RunConfig(
    scheme="bogoliubov", regime="intracavity", mode="series",
    n_th=(10.0, 100.0, 1000.0, 10000.0), output="fig2b.csv",
    g1=4000.0, g2=3500.0, kappa1=10.0, kappa2=10.0, delta=0.0,
    t_max=_T_MAX, dt=_DT, sample_stride=_STRIDE,
)

_FIG3_N_TH = _log_grid(1.0, 4.0, 20)

_FIG3_SM = RunConfig(
    scheme="sm", regime="intracavity", mode="sweep",
    n_th=_FIG3_N_TH, output="fig3.csv",
    g1=4000.0, g2=4000.0, kappa1=10.0, kappa2=10.0, delta=_DELTA,
    t_max=_T_MAX, dt=_DT, sample_stride=_STRIDE,
)

_FIG3_BOG = RunConfig(
    scheme="bogoliubov", regime="intracavity", mode="sweep",
    n_th=_FIG3_N_TH, output="fig3.csv",
    g1=4000.0, g2=3500.0, kappa1=10.0, kappa2=10.0, delta=0.0,
    t_max=_T_MAX, dt=_DT, sample_stride=_STRIDE,
)

_FIG4A_SERIES = RunConfig(
    scheme="sm", regime="badcavity", mode="series",
    n_th=(10.0, 100.0, 1000.0), output="fig4a.csv",
    G1=667.0, G2=667.0, kappa1=6000.0, kappa2=6000.0, delta=_DELTA,
    tau_max=_TAU_MAX_A, tau_points=_TAU_POINTS_A,
)

_FIG4B_N_TH = _log_grid(1.0, 3.0, 20)

_FIG4B_EQUAL = RunConfig(
    scheme="sm", regime="badcavity", mode="sweep",
    n_th=_FIG4B_N_TH, output="fig4b.csv",
    G1=667.0, G2=667.0, kappa1=6000.0, kappa2=6000.0, delta=_DELTA,
    tau_max=_TAU_MAX_B, tau_points=_TAU_POINTS_B,
)

_FIG4B_UNEQUAL = RunConfig(
    scheme="sm", regime="badcavity", mode="sweep",
    n_th=_FIG4B_N_TH, output="fig4b.csv",
    G1=667.0, G2=540.0, kappa1=6000.0, kappa2=6000.0, delta=_DELTA,
    tau_max=_TAU_MAX_B, tau_points=_TAU_POINTS_B,
)

PRESETS: tuple[FigurePreset, ...] = (
    FigurePreset(
        name="fig2a",
        description=(
            "Pulsed detuned scheme, intracavity negativity vs time at "
            "n_th in {10, 10^2, 10^3, 10^4} (g = 4e3, delta = 1e3, kappa = 10)"
        ),
        configs=(_FIG2A_SERIES,),
    ),
    FigurePreset(
        name="fig2b",
        description=(
            "Resonant two-tone scheme, intracavity negativity vs time at "
            "n_th in {10, 10^2, 10^3, 10^4} (g1 = 4e3, g2 = 3.5e3, kappa = 10)"
        ),
        configs=(_FIG2B_SERIES,),
    ),
    FigurePreset(
        name="fig3",
        description=(
            "Peak intracavity negativity vs n_th for both schemes on a "
            "20-point log grid over [10, 10^4]"
        ),
        configs=(_FIG3_SM, _FIG3_BOG),
    ),
    FigurePreset(
        name="fig4a",
        description=(
            "Adiabatic output-mode negativity vs accumulation duration at "
            "n_th in {10, 10^2, 10^3} (G = 667, delta = 1e3, kappa = 6e3)"
        ),
        configs=(_FIG4A_SERIES,),
    ),
    FigurePreset(
        name="fig4b",
        description=(
            "Peak output-mode negativity vs n_th on a 20-point log grid over "
            "[10, 10^3], equal (667, 667) vs unequal (667, 540) couplings"
        ),
        configs=(_FIG4B_EQUAL, _FIG4B_UNEQUAL),
    ),
)

_BY_NAME = {p.name: p for p in PRESETS}

# Every frozen preset must satisfy the same validation as a parsed config.
for _preset in PRESETS:
    for _cfg in _preset.configs:
        validate_config(_cfg)


def get_preset(name: str) -> FigurePreset:
    try:
        return _BY_NAME[name]
    except KeyError:
        known = ", ".join(sorted(_BY_NAME))
        raise ConfigError(f"unknown preset {name!r}; available: {known}") from None


def list_presets() -> tuple[FigurePreset, ...]:
    """All presets in stable (figure) order."""
    return PRESETS
