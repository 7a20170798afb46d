"""Exact lossless solution of the detuned pulsed scheme.

The lossless interaction admits a closed-form propagator whose
mechanical-coupling coefficients F(t), G(t) all vanish at the pulse times
t_n = 2*pi*n/delta, leaving a pure two-mode optical map a_i -> mu a_i +
nu a_j^dagger with mu = 1 + i r and nu = i r. This module provides those
coefficient functions, the optical map at t_n, the induced symplectic
covariance transform, and the closed-form logarithmic negativity used as an
independent oracle by the dynamics tests.

The closed form is evaluated as E_N = max(0, 1 + (1/2) log2(Q + S)) with
Q = 2r^4 + 2r^2 + 1/4 and S = sqrt(4r^8 + 8r^6 + 5r^4 + r^2). This is
algebraically identical to the difference form
-(1/2) log2(2r^2 - S + 2r^4 + 1/4) - 1 because Q^2 - S^2 = 1/16 exactly,
but it stays accurate at large r where the difference form cancels
catastrophically.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import cos, pi, sin

import numpy as np

from . import tolerances as tol
from .errors import NumericalError
from .gaussian import CovarianceMatrix, symplectic_form

_LD = np.longdouble


@dataclass(frozen=True)
class PropagatorCoefficients:
    """Coefficients of the x/p slots in F(t), G(t) and of x^2, p^2, px in A(t).

    The EPR combinations x = x1 + x2, p = p2 - p1 commute, so F, G, A are
    handled purely through these scalar coefficient functions.
    """

    f_x: float
    f_p: float
    g_x: float
    g_p: float
    a_xx: float
    a_pp: float
    a_xp: float


@dataclass(frozen=True)
class BogoliubovMap:
    """Two-mode map a_i -> mu a_i + nu a_j^dagger at a pulse time t_n."""

    mu: complex
    nu: complex
    r: float


def coefficient_functions(g: float, delta: float, t: float) -> PropagatorCoefficients:
    """Propagator coefficient functions at time t for coupling g and detuning delta.

    delta = 0 is rejected: the expressions divide by delta and the resonant
    limit is a different physical regime, handled by the resonant scheme.
    """
    if delta == 0:
        raise ValueError("coefficient_functions requires delta != 0")
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    q = g / delta
    s, c = sin(delta * t), cos(delta * t)
    s2, c2 = sin(2 * delta * t), cos(2 * delta * t)
    q2 = q * q
    return PropagatorCoefficients(
        f_x=q * s,
        f_p=q * (1.0 - c),
        g_x=q * (1.0 - c),
        g_p=-q * s,
        a_xx=-q2 * (delta * t / 2.0 - s2 / 4.0),
        a_pp=-q2 * (delta * t / 2.0 + s2 / 4.0 - s),
        a_xp=-q2 * ((c2 - 1.0) / 2.0 - (c - 1.0)),
    )


def pulse_time(delta: float, n: int) -> float:
    """n-th timing-condition instant t_n = 2*pi*n/delta."""
    if delta <= 0:
        raise ValueError(f"delta must be > 0, got {delta}")
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    return 2.0 * pi * n / delta


def bogoliubov_map(g: float, delta: float, n: int) -> BogoliubovMap:
    """Optical two-mode map at t_n: mu = 1 + i r, nu = i r, r = pi n g^2 / delta^2."""
    if delta <= 0:
        raise ValueError(f"delta must be > 0, got {delta}")
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    r = pi * n * g * g / (delta * delta)
    return BogoliubovMap(mu=complex(1.0, r), nu=complex(0.0, r), r=r)


def two_mode_squeeze_matrix(bmap: BogoliubovMap) -> np.ndarray:
    """Real 4x4 symplectic matrix realizing the map on (x1, p1, x2, p2).

    Expanding a_i' = (1 + i r) a_i + i r a_j^dagger in quadratures gives
    x_i' = x_i - r p_i + r p_j and p_i' = p_i + r x_i + r x_j.
    Symplecticity S Omega S^T = Omega is checked on every construction.
    """
    r = bmap.r
    s = np.array(
        [
            [1.0, -r, 0.0, r],
            [r, 1.0, r, 0.0],
            [0.0, r, 1.0, -r],
            [r, 0.0, r, 1.0],
        ]
    )
    omega = symplectic_form(2)
    err = float(np.abs(s @ omega @ s.T - omega).max())
    if err > tol.SYMPLECTIC_ATOL:
        raise NumericalError(f"constructed map is not symplectic: |S Omega S.T - Omega| = {err:.3e}")
    return s


def apply_two_mode_map(bmap: BogoliubovMap, v_in: CovarianceMatrix) -> CovarianceMatrix:
    """Covariance transform V -> S V S^T under the two-mode map."""
    if v_in.n_modes != 2:
        raise ValueError(f"apply_two_mode_map needs a two-mode state, got {v_in.n_modes} modes")
    # The matrix entries are exact in float64; the longdouble product keeps
    # the r^2-scale entries accurate enough for 1e-9 oracle pairing at r ~ 60.
    s = np.asarray(two_mode_squeeze_matrix(bmap), dtype=_LD)
    v_out = s @ np.asarray(v_in.matrix, dtype=_LD) @ s.T
    v_out = 0.5 * (v_out + v_out.T)
    return CovarianceMatrix(np.asarray(v_out, dtype=float))


def closed_form_logneg(r: float) -> float:
    """Closed-form logarithmic negativity of the lossless map at squeezing r."""
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    x = _LD(r)
    q = 2 * x**4 + 2 * x**2 + _LD(0.25)
    s = np.sqrt(4 * x**8 + 8 * x**6 + 5 * x**4 + x**2)
    if q + s <= 0:
        raise NumericalError(f"log argument {float(q + s):.3e} <= 0 at r = {r}; formula misuse")
    e_n = _LD(1.0) + 0.5 * np.log2(q + s)
    return float(e_n) if e_n > 0.0 else 0.0
