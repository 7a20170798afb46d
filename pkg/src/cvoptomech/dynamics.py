"""Fixed-step Lyapunov integration and intracavity entanglement time series.

dV/dt = M V + V M.T + D is integrated with classic 4th-order Runge-Kutta at a
fixed step; the drift is constant and the solution smooth, so accuracy is set
by the stiffness guard dt <= 0.01 / (largest rate) rather than by adaptivity.
Every recorded sample is re-validated against the physicality bound, and
unbounded trace growth aborts the run as an instability.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from . import tolerances as tol
from .errors import PhysicalityError, StabilityError
from .gaussian import CovarianceMatrix, log_negativity
from .model import DriftDiffusion


@dataclass(frozen=True)
class IntegrationConfig:
    """Time grid for a fixed-step run.

    max_rate, when given, enforces the stiffness guard
    dt <= STIFFNESS_FACTOR / max_rate at construction.
    """

    t_max: float
    dt: float
    sample_stride: int = 1
    max_rate: float | None = None

    def __post_init__(self):
        if not np.isfinite(self.dt) or self.dt <= 0:
            raise ValueError(f"dt must be finite and > 0, got {self.dt}")
        if not np.isfinite(self.t_max) or self.t_max < self.dt:
            raise ValueError(f"t_max must be finite and >= dt, got {self.t_max}")
        if int(self.sample_stride) != self.sample_stride or self.sample_stride < 1:
            raise ValueError(f"sample_stride must be a positive integer, got {self.sample_stride}")
        if self.n_steps > tol.MAX_STEPS:
            raise ValueError(f"t_max/dt = {self.n_steps} exceeds the {tol.MAX_STEPS:.0e} step cap")
        if self.max_rate is not None:
            guard = tol.STIFFNESS_FACTOR / self.max_rate
            if self.dt > guard * (1.0 + 1e-12):
                raise ValueError(
                    f"dt = {self.dt:g} violates the stiffness guard "
                    f"{tol.STIFFNESS_FACTOR:g}/max_rate = {guard:g}"
                )

    @property
    def n_steps(self) -> int:
        return int(round(self.t_max / self.dt))


@dataclass(frozen=True, eq=False)
class EntanglementSeries:
    """Sampled times, logarithmic-negativity values, and 3-point local maxima."""

    times: np.ndarray
    values: np.ndarray
    peaks: tuple[tuple[float, float], ...]

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.shape != v.shape or t.ndim != 1 or t.size == 0:
            raise ValueError(f"times/values must be equal-length 1-D arrays, got {t.shape}, {v.shape}")
        if t.size > 1 and not np.all(np.diff(t) > 0):
            raise ValueError("times must be strictly ascending")
        if np.any(v < 0):
            raise ValueError("negativity values must be >= 0")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)


def _integrate_raw(dd: DriftDiffusion, v0: np.ndarray, cfg: IntegrationConfig):
    """Run the RK4 kernel; returns (times, records). Raises StabilityError on blowup."""
    m = np.ascontiguousarray(dd.drift)
    mt = np.ascontiguousarray(dd.drift.T)
    d = np.ascontiguousarray(dd.diffusion)
    v = np.ascontiguousarray(v0, dtype=float)
    trace_cap = tol.TRACE_BLOWUP_FACTOR * float(np.trace(v))
    out, n_rec, last_step, flag = _kernels.rk4_lyapunov(
        m, mt, d, v, cfg.dt, cfg.n_steps, int(cfg.sample_stride), trace_cap
    )
    if flag:
        raise StabilityError(
            f"covariance trace exceeded {tol.TRACE_BLOWUP_FACTOR:.0e} x initial "
            f"at step {last_step} (t = {last_step * cfg.dt:.9g}); dynamics unstable"
        )
    times = np.arange(n_rec) * (cfg.sample_stride * cfg.dt)
    return times, out[:n_rec]


def integrate_covariance(
    dd: DriftDiffusion,
    v0: CovarianceMatrix,
    cfg: IntegrationConfig,
    physicality_tol: float = tol.SAMPLE_PHYSICALITY_TOL,
) -> list[tuple[float, CovarianceMatrix]]:
    """Integrate from a physical initial state, recording every sample_stride-th step.

    Each recorded sample is re-symmetrized by construction and checked against
    physicality_tol; a violation aborts with the offending step and symplectic
    eigenvalue. If sample_stride does not divide the step count, the trailing
    unaligned steps are integrated but not recorded.

    At extreme squeezing (E_N beyond ~16, covariance entries beyond ~1e4 with
    smallest ordinary eigenvalue ~1e-6) accumulated double-precision rounding
    alone can push the smallest symplectic eigenvalue a few 1e-6 below 1/2,
    so runs deliberately probing such states may pass a looser bound here.
    """
    if not isinstance(v0, CovarianceMatrix):
        v0 = CovarianceMatrix(v0)
    times, records = _integrate_raw(dd, v0.matrix, cfg)
    samples: list[tuple[float, CovarianceMatrix]] = []
    for k in range(times.shape[0]):
        try:
            cm = CovarianceMatrix(records[k], physicality_tol=physicality_tol)
        except PhysicalityError as exc:
            raise PhysicalityError(
                f"integration sample {k} (step {k * cfg.sample_stride}, "
                f"t = {times[k]:.9g}) failed the physicality check: {exc}"
            ) from exc
        samples.append((float(times[k]), cm))
    return samples


def find_peaks(times: np.ndarray, values: np.ndarray) -> tuple[tuple[float, float], ...]:
    """Interior 3-point local maxima: v[i] > v[i-1], v[i] >= v[i+1], v[i] > 0.

    The strict left comparison keeps flat (e.g. identically zero) stretches
    from registering, and counts a flat-topped peak once.
    """
    peaks = []
    for i in range(1, len(values) - 1):
        if values[i] > values[i - 1] and values[i] >= values[i + 1] and values[i] > 0:
            peaks.append((float(times[i]), float(values[i])))
    return tuple(peaks)


def entanglement_series(
    samples: list[tuple[float, CovarianceMatrix]],
    physicality_tol: float = tol.SAMPLE_PHYSICALITY_TOL,
) -> EntanglementSeries:
    """Logarithmic negativity of the optical 4x4 block at each sample, with peaks."""
    if not samples:
        raise ValueError("entanglement_series needs a nonempty sample sequence")
    times = np.array([t for t, _ in samples])
    values = np.array(
        [
            log_negativity(v.matrix[:4, :4], physicality_tol=physicality_tol).e_n
            for _, v in samples
        ]
    )
    return EntanglementSeries(times=times, values=values, peaks=find_peaks(times, values))


def max_negativity(series: EntanglementSeries) -> tuple[float, float]:
    """Global maximum over the recorded window; ties resolve to the earliest time."""
    i = int(np.argmax(series.values))
    return float(series.times[i]), float(series.values[i])


def mechanical_return_residual(v_t: CovarianceMatrix, v0: CovarianceMatrix) -> float:
    """Distance from mechanical return: Frobenius norm of the mechanical-block
    difference plus the norms of both optical-mechanical cross blocks of v_t."""
    a, b = v_t.matrix, v0.matrix
    if a.shape != (6, 6) or b.shape != (6, 6):
        raise ValueError("mechanical_return_residual needs three-mode covariances")
    return float(
        np.linalg.norm(a[4:, 4:] - b[4:, 4:])
        + np.linalg.norm(a[:4, 4:])
        + np.linalg.norm(a[4:, :4])
    )
