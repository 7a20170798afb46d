"""Bad-cavity pipeline: filtered output modes of the adiabatically eliminated system.

With kappa_i >> g_i the cavity fields follow the mechanics, a_out,1 =
-2i sqrt(G1) b - a_in,1 and a_out,2^dag = 2i sqrt(G2) b - a_in,2^dag with
G_i = g_i^2 / kappa_i, and the mechanical mode obeys db = -z b + noise with
z = Gamma + i delta, Gamma = 2 G1 - 2 G2 + gamma/2. The flat-top output modes
A_out,i = B_i / sqrt(tau), B_i = int_0^tau a_out,i dt, are tracked by
extending the state with unnormalized accumulator quadratures (X_i, P_i) so
one constant-drift Lyapunov integration yields their covariance; dividing the
accumulator block by tau gives the physical output-mode covariance.

The same covariance is computed independently by double numerical integration
of the analytic two-time correlations of a_out,i (no shared code path); the
two routes agreeing to ~1e-6 pins down the cross-diffusion blocks between the
mechanical and accumulator quadratures, including their signs.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import sqrt

import numpy as np

from . import _kernels
from . import tolerances as tol
from .dynamics import EntanglementSeries, IntegrationConfig, _integrate_raw, find_peaks
from .errors import NumericalError, PhysicalityError, StabilityError
from .gaussian import CovarianceMatrix, log_negativity
from .model import DriftDiffusion


class BadCavityValidityWarning(UserWarning):
    """Parameters are outside the comfortably adiabatic regime kappa >= 10 g."""


@dataclass(frozen=True)
class BadCavityParams:
    """Effective rates of the adiabatic model, in units of the mechanical linewidth."""

    G1: float
    G2: float
    kappa1: float
    kappa2: float
    delta: float
    n_th: float = 0.0
    gamma: float = 1.0

    def __post_init__(self):
        for name in ("G1", "G2", "kappa1", "kappa2", "n_th"):
            val = getattr(self, name)
            if not np.isfinite(val) or val < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {val}")
        if not np.isfinite(self.gamma) or self.gamma <= 0:
            raise ValueError(f"gamma must be finite and > 0, got {self.gamma}")
        if not np.isfinite(self.delta):
            raise ValueError(f"delta must be finite, got {self.delta}")
        if self.G1 > 0 and self.kappa1 == 0:
            raise ValueError("G1 > 0 requires kappa1 > 0")
        if self.G2 > 0 and self.kappa2 == 0:
            raise ValueError("G2 > 0 requires kappa2 > 0")

    @property
    def big_gamma(self) -> float:
        """Effective mechanical damping Gamma = 2 G1 - 2 G2 + gamma/2."""
        return 2.0 * self.G1 - 2.0 * self.G2 + self.gamma / 2.0

    @property
    def z(self) -> complex:
        return complex(self.big_gamma, self.delta)

    @property
    def g1(self) -> float:
        """Bare coupling implied by G1 = g1^2 / kappa1."""
        return sqrt(self.G1 * self.kappa1)

    @property
    def g2(self) -> float:
        return sqrt(self.G2 * self.kappa2)

    @property
    def bad_cavity_valid(self) -> bool:
        """Operating-policy flag: couplings no stronger than half the linewidth."""
        return self.g1 <= 0.5 * self.kappa1 and self.g2 <= 0.5 * self.kappa2

    @property
    def strongly_adiabatic(self) -> bool:
        """Strict adiabaticity kappa_i >= 10 g_i."""
        return self.kappa1 >= 10.0 * self.g1 and self.kappa2 >= 10.0 * self.g2

    @property
    def max_rate(self) -> float:
        """Largest rate in the extended drift; sets the stiffness guard."""
        return max(
            abs(self.big_gamma),
            abs(self.delta),
            2.0 * sqrt(self.G1),
            2.0 * sqrt(self.G2),
            self.gamma,
        )


@dataclass(frozen=True, eq=False)
class OutputModeResult:
    """Pulse duration, normalized 4x4 output-mode covariance, and its negativity."""

    tau: float
    covariance: CovarianceMatrix
    e_n: float


def build_extended_system(p: BadCavityParams) -> DriftDiffusion:
    """Drift/diffusion for the state (xb, pb, X1, P1, X2, P2).

    The diffusion is assembled as L sigma L.T from the noise loading matrix L
    over the input quadratures (optical 1, optical 2, mechanical), which makes
    it PSD by construction and fixes the mechanical-accumulator cross blocks:
    the same input noise drives both the mechanics and the accumulators.
    """
    if not p.bad_cavity_valid:
        warnings.warn(
            f"couplings exceed half the cavity linewidth (g1/kappa1 = "
            f"{p.g1 / p.kappa1 if p.kappa1 else 0:.3g}, g2/kappa2 = "
            f"{p.g2 / p.kappa2 if p.kappa2 else 0:.3g}); adiabatic model unreliable",
            BadCavityValidityWarning,
            stacklevel=2,
        )
    elif not p.strongly_adiabatic:
        warnings.warn(
            f"kappa_i < 10 g_i (g1/kappa1 = {p.g1 / p.kappa1 if p.kappa1 else 0:.3g}, "
            f"g2/kappa2 = {p.g2 / p.kappa2 if p.kappa2 else 0:.3g}); "
            "adiabatic elimination is approximate at these ratios",
            BadCavityValidityWarning,
            stacklevel=2,
        )
    s1 = 2.0 * sqrt(p.G1)
    s2 = 2.0 * sqrt(p.G2)
    gam = p.gamma
    m = np.zeros((6, 6))
    m[0, 0] = -p.big_gamma
    m[0, 1] = p.delta
    m[1, 0] = -p.delta
    m[1, 1] = -p.big_gamma
    m[2, 1] = s1
    m[3, 0] = -s1
    m[4, 1] = -s2
    m[5, 0] = -s2
    # Noise loading over input quadratures (x1_in, p1_in, x2_in, p2_in, xb_in, pb_in).
    ell = np.zeros((6, 6))
    ell[0, 1] = -s1
    ell[0, 3] = s2
    ell[0, 4] = -sqrt(gam)
    ell[1, 0] = s1
    ell[1, 2] = s2
    ell[1, 5] = -sqrt(gam)
    ell[2, 0] = -1.0
    ell[3, 1] = -1.0
    ell[4, 2] = -1.0
    ell[5, 3] = -1.0
    sigma = np.diag([0.5, 0.5, 0.5, 0.5, p.n_th + 0.5, p.n_th + 0.5])
    d = ell @ sigma @ ell.T
    d = 0.5 * (d + d.T)
    return DriftDiffusion(drift=m, diffusion=d)


def initial_extended_state(p: BadCavityParams) -> np.ndarray:
    """Thermal mechanical mode, zero accumulators. Not a quantum state covariance
    (the accumulators start with zero variance), so it is kept as a raw array."""
    return np.diag([p.n_th + 0.5, p.n_th + 0.5, 0.0, 0.0, 0.0, 0.0])


def _check_duration(p: BadCavityParams, tau: float) -> None:
    if not np.isfinite(tau) or tau <= 0:
        raise ValueError(f"tau must be finite and > 0, got {tau}")
    if p.big_gamma < 0 and tau > 1.0 / abs(p.big_gamma):
        raise StabilityError(
            f"Gamma = {p.big_gamma:.6g} < 0 (pair creation dominates) and requested "
            f"tau = {tau:.6g} exceeds 1/|Gamma| = {1.0 / abs(p.big_gamma):.6g}"
        )


def _integration_config(p: BadCavityParams, tau: float, dt: float | None) -> IntegrationConfig:
    if dt is None:
        guard = tol.STIFFNESS_FACTOR / p.max_rate
        n = max(16, int(np.ceil(tau / guard)))
        dt = tau / n
    else:
        n = int(round(tau / dt))
        if abs(n * dt - tau) > 1e-9 * tau or n < 1:
            raise ValueError(f"dt = {dt} does not evenly divide tau = {tau}")
    return IntegrationConfig(t_max=tau, dt=dt, sample_stride=n, max_rate=p.max_rate)


def output_mode_covariance(p: BadCavityParams, tau: float, dt: float | None = None) -> OutputModeResult:
    """Covariance and negativity of the flat-top output-mode pair of duration tau."""
    _check_duration(p, tau)
    dd = build_extended_system(p)
    cfg = _integration_config(p, tau, dt)
    _, records = _integrate_raw(dd, initial_extended_state(p), cfg)
    normalized = records[-1][2:, 2:] / tau
    try:
        cov = CovarianceMatrix(normalized, physicality_tol=tol.SAMPLE_PHYSICALITY_TOL)
    except PhysicalityError as exc:
        raise PhysicalityError(f"normalized output covariance at tau = {tau:.9g}: {exc}") from exc
    res = log_negativity(cov, physicality_tol=tol.SAMPLE_PHYSICALITY_TOL)
    return OutputModeResult(tau=tau, covariance=cov, e_n=res.e_n)


def entanglement_vs_duration(
    p: BadCavityParams, tau_grid: np.ndarray, dt: float | None = None
) -> EntanglementSeries:
    """Output-mode negativity over an ascending grid of pulse durations."""
    taus = np.asarray(tau_grid, dtype=float)
    if taus.ndim != 1 or taus.size == 0:
        raise ValueError("tau_grid must be a nonempty 1-D sequence")
    if np.any(taus <= 0) or (taus.size > 1 and not np.all(np.diff(taus) > 0)):
        raise ValueError("tau_grid must be strictly ascending and positive")
    values = np.array([output_mode_covariance(p, float(tau), dt=dt).e_n for tau in taus])
    return EntanglementSeries(times=taus, values=values, peaks=find_peaks(taus, values))


def double_integral_oracle(p: BadCavityParams, tau: float, grid_points: int) -> CovarianceMatrix:
    """Independent route to the output-mode covariance by direct double integration
    of the analytic two-time correlations; shares no code with the extended system.

    The kernels follow from the formal mechanical solution b(t) = b(0) e^{-z t}
    + e^{-z t} int_0^t e^{z s} (noise) ds: normal/anti-normal mechanical
    correlations with accumulated source weights c_plus = 4 G1 + gamma (n_th+1),
    c_minus = 4 G2 + gamma n_th, plus echo terms where the same input noise
    appears in both b(t) and the directly reflected output. The exact operator
    identity <B1 B1+> - <B1+ B1> = tau is used as a runtime self-check.
    """
    _check_duration(p, tau)
    if int(grid_points) != grid_points or grid_points < 500:
        raise ValueError(f"grid_points must be an integer >= 500, got {grid_points}")
    c_plus = 4.0 * p.G1 + p.gamma * (p.n_th + 1.0)
    c_minus = 4.0 * p.G2 + p.gamma * p.n_th
    i_sn, i_sa, i_e1, i_e2, i_qa, i_qb = _kernels.output_integrals(
        p.big_gamma, p.delta, p.n_th, c_plus, c_minus, tau, int(grid_points)
    )
    g1, g2 = 4.0 * p.G1, 4.0 * p.G2
    g12 = 4.0 * sqrt(p.G1 * p.G2)
    b1b1d = g1 * (i_sn - i_e1) + tau
    b1db1 = g1 * i_sa
    b2b2d = g2 * (i_sa + i_e2) + tau
    b2db2 = g2 * i_sn
    b1b2 = -g12 * (i_sn - i_qa)
    b2b1 = -g12 * (i_sa + i_qb)
    comm = (b1b1d - b1db1) / tau
    if abs(comm - 1.0) > tol.COMMUTATOR_SELFCHECK_TOL:
        raise NumericalError(f"commutator self-check failed: <[B1, B1+]>/tau = {comm:.12g}")
    # Correlation matrix over (A1, A1+, A2, A2+) with A_i = B_i / sqrt(tau).
    c = np.zeros((4, 4), dtype=complex)
    c[0, 1] = b1b1d / tau
    c[1, 0] = b1db1 / tau
    c[2, 3] = b2b2d / tau
    c[3, 2] = b2db2 / tau
    c[0, 2] = b1b2 / tau
    c[2, 0] = b2b1 / tau
    c[1, 3] = np.conj(c[2, 0])
    c[3, 1] = np.conj(c[0, 2])
    s = 1.0 / np.sqrt(2.0)
    t_quad = np.array(
        [
            [s, s, 0, 0],
            [-1j * s, 1j * s, 0, 0],
            [0, 0, s, s],
            [0, 0, -1j * s, 1j * s],
        ]
    )
    vc = t_quad @ c @ t_quad.T
    v = 0.5 * np.real(vc + vc.T)
    return CovarianceMatrix(v, physicality_tol=tol.SAMPLE_PHYSICALITY_TOL)
