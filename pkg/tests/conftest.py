"""Shared fixtures: kernel warmup and canonical parameter sets."""

import warnings

import numpy as np
import pytest

import cvoptomech as cv


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger JIT compilation / cache loading once, outside any timed test."""
    p = cv.SystemParams(g1=1.0, g2=1.0, kappa1=1.0, kappa2=1.0, delta=1.0)
    dd = cv.build_drift_diffusion(p, cv.Scheme.SORENSEN_MOLMER)
    cfg = cv.IntegrationConfig(t_max=0.01, dt=0.001)
    cv.integrate_covariance(dd, cv.thermal_vacuum_initial(0.0), cfg)
    bp = cv.BadCavityParams(G1=1.0, G2=0.5, kappa1=1000.0, kappa2=1000.0, delta=1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        cv.double_integral_oracle(bp, 0.1, 500)


@pytest.fixture()
def fig4a_params():
    """Equal-coupling output-mode parameters used by the duration-scan figure."""
    def make(n_th: float = 10.0) -> cv.BadCavityParams:
        return cv.BadCavityParams(
            G1=667.0, G2=667.0, kappa1=6000.0, kappa2=6000.0, delta=1000.0, n_th=n_th
        )
    return make


@pytest.fixture()
def vacuum_two_mode():
    return cv.CovarianceMatrix(0.5 * np.eye(4))
