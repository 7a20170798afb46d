"""Continuous-variable entanglement in a three-mode optomechanical system.

Two optical cavity modes couple to one mechanical mode. The package simulates
the Gaussian (covariance-matrix) dynamics of two entangling schemes — a
detuned scheme that disentangles the mechanics at stroboscopic pulse times,
and a resonant two-tone comparison scheme — plus the entanglement of filtered
output modes in the adiabatic (bad-cavity) regime, with exact analytic
cross-checks for both pipelines.

Conventions: hbar = 1, vacuum quadrature variance 1/2, mode ordering
(x1, p1, x2, p2, xb, pb), all rates in units of the mechanical linewidth.
"""

from ._kernels import BACKEND
from .config import RunConfig, parse_config, validate_config
from .dynamics import (
    EntanglementSeries,
    IntegrationConfig,
    entanglement_series,
    find_peaks,
    integrate_covariance,
    max_negativity,
    mechanical_return_residual,
)
from .errors import ConfigError, NumericalError, PhysicalityError, StabilityError
from .gaussian import (
    CovarianceMatrix,
    NegativityResult,
    log_negativity,
    min_symplectic_eigenvalue,
    symplectic_eigenvalues,
    symplectic_form,
    thermal_vacuum_initial,
    two_mode_blocks,
)
from .model import (
    DriftDiffusion,
    Scheme,
    SystemParams,
    build_drift_diffusion,
    check_scheme,
    stability_margin,
)
from .output_mode import (
    BadCavityParams,
    BadCavityValidityWarning,
    OutputModeResult,
    double_integral_oracle,
    entanglement_vs_duration,
    output_mode_covariance,
)
from .presets import FigurePreset, get_preset, list_presets
from .propagator import (
    BogoliubovMap,
    PropagatorCoefficients,
    apply_two_mode_map,
    bogoliubov_map,
    closed_form_logneg,
    coefficient_functions,
    pulse_time,
    two_mode_squeeze_matrix,
)
from .version import __version__

__all__ = [
    "BACKEND",
    "BadCavityParams",
    "BadCavityValidityWarning",
    "BogoliubovMap",
    "ConfigError",
    "CovarianceMatrix",
    "DriftDiffusion",
    "EntanglementSeries",
    "FigurePreset",
    "IntegrationConfig",
    "NegativityResult",
    "NumericalError",
    "OutputModeResult",
    "PhysicalityError",
    "PropagatorCoefficients",
    "RunConfig",
    "Scheme",
    "StabilityError",
    "SystemParams",
    "apply_two_mode_map",
    "bogoliubov_map",
    "build_drift_diffusion",
    "check_scheme",
    "closed_form_logneg",
    "coefficient_functions",
    "double_integral_oracle",
    "entanglement_series",
    "entanglement_vs_duration",
    "find_peaks",
    "get_preset",
    "integrate_covariance",
    "list_presets",
    "log_negativity",
    "max_negativity",
    "mechanical_return_residual",
    "min_symplectic_eigenvalue",
    "output_mode_covariance",
    "parse_config",
    "pulse_time",
    "stability_margin",
    "symplectic_eigenvalues",
    "symplectic_form",
    "thermal_vacuum_initial",
    "two_mode_blocks",
    "two_mode_squeeze_matrix",
    "validate_config",
    "__version__",
]
