"""Drift/diffusion construction for the three-mode Langevin dynamics.

State ordering (x1, p1, x2, p2, xb, pb). Mode 1 couples through the
state-transfer (anti-Stokes) sideband and mode 2 through the pair-creation
(Stokes) sideband; expanding the rotating-frame Langevin equations with
a = (x + i p) / sqrt(2) gives

    dx1 = -(k1/2) x1 + g1 pb        dp1 = -(k1/2) p1 - g1 xb
    dx2 = -(k2/2) x2 - g2 pb        dp2 = -(k2/2) p2 - g2 xb
    dxb = -(gam/2) xb + delta pb + g1 p1 - g2 p2
    dpb = -(gam/2) pb - delta xb - g1 x1 - g2 x2

with diffusion D = diag(k1/2, k1/2, k2/2, k2/2, gam (n_th + 1/2),
gam (n_th + 1/2)) for vacuum optical inputs and a thermal mechanical bath.
All rates are in units of the mechanical linewidth (gamma = 1).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import tolerances as tol
from .errors import NumericalError

N_MODES = 3
DIM = 2 * N_MODES


class Scheme(enum.Enum):
    """Detuned pulsed scheme (delta > 0) or resonant comparison scheme (delta = 0)."""

    SORENSEN_MOLMER = "sm"
    BOGOLIUBOV = "bogoliubov"


@dataclass(frozen=True)
class SystemParams:
    """All rates of the three-mode model, in units of the mechanical linewidth."""

    g1: float
    g2: float
    kappa1: float
    kappa2: float
    delta: float
    n_th: float = 0.0
    gamma: float = 1.0

    def __post_init__(self):
        # gamma = 0 is admitted (not just gamma > 0): the exact lossless oracle
        # runs switch off both optical and mechanical damping.
        for name in ("g1", "g2", "kappa1", "kappa2", "n_th", "gamma"):
            val = getattr(self, name)
            if not np.isfinite(val) or val < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {val}")
        if not np.isfinite(self.delta):
            raise ValueError(f"delta must be finite, got {self.delta}")

    @property
    def max_rate(self) -> float:
        """Largest rate in the drift; sets the fixed-step stiffness guard."""
        return max(self.g1, self.g2, self.kappa1, self.kappa2, abs(self.delta), self.gamma)


@dataclass(frozen=True, eq=False)
class DriftDiffusion:
    """Pair (M, D) defining the covariance flow dV/dt = M V + V M.T + D."""

    drift: np.ndarray
    diffusion: np.ndarray

    def __post_init__(self):
        m = np.array(self.drift, dtype=float)
        d = np.array(self.diffusion, dtype=float)
        if m.shape != d.shape or m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"drift/diffusion must be equal square shapes, got {m.shape} and {d.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("drift matrix has non-finite entries")
        if np.abs(d - d.T).max() > tol.SYMMETRY_ATOL:
            raise ValueError("diffusion matrix not symmetric")
        eig_min = float(np.linalg.eigvalsh(d).min())
        if eig_min < -tol.DIFFUSION_PSD_TOL:
            raise ValueError(f"diffusion matrix not PSD: min eigenvalue {eig_min:.3e}")
        m.setflags(write=False)
        d.setflags(write=False)
        object.__setattr__(self, "drift", m)
        object.__setattr__(self, "diffusion", d)


def check_scheme(params: SystemParams, scheme: Scheme) -> None:
    """Reject parameter/scheme pairings outside the modeled regimes."""
    if scheme is Scheme.SORENSEN_MOLMER and params.delta <= 0:
        raise ValueError(f"the detuned scheme requires delta > 0, got delta = {params.delta}")
    if scheme is Scheme.BOGOLIUBOV and params.delta != 0:
        raise ValueError(
            f"the resonant scheme is modeled at delta = 0 only, got delta = {params.delta}"
        )


def build_drift_diffusion(params: SystemParams, scheme: Scheme) -> DriftDiffusion:
    """Drift and diffusion matrices of the quadrature Langevin equations."""
    check_scheme(params, scheme)
    g1, g2 = params.g1, params.g2
    k1, k2 = params.kappa1, params.kappa2
    delta, gam = params.delta, params.gamma
    m = np.zeros((DIM, DIM))
    m[0, 0] = -k1 / 2.0
    m[0, 5] = g1
    m[1, 1] = -k1 / 2.0
    m[1, 4] = -g1
    m[2, 2] = -k2 / 2.0
    m[2, 5] = -g2
    m[3, 3] = -k2 / 2.0
    m[3, 4] = -g2
    m[4, 4] = -gam / 2.0
    m[4, 5] = delta
    m[4, 1] = g1
    m[4, 3] = -g2
    m[5, 5] = -gam / 2.0
    m[5, 4] = -delta
    m[5, 0] = -g1
    m[5, 2] = -g2
    d = np.diag(
        [
            k1 / 2.0,
            k1 / 2.0,
            k2 / 2.0,
            k2 / 2.0,
            gam * (params.n_th + 0.5),
            gam * (params.n_th + 0.5),
        ]
    )
    return DriftDiffusion(drift=m, diffusion=d)


def stability_margin(dd: DriftDiffusion) -> float:
    """Max real part over drift eigenvalues; > 0 means unbounded covariance growth."""
    try:
        ev = np.linalg.eigvals(dd.drift)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - eigensolver failure
        raise NumericalError(f"eigensolver failed on drift matrix: {exc}") from exc
    return float(ev.real.max())
