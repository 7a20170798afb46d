"""All numerical tolerances in one place.

Values are deliberate, not tuned per test: symmetry at 1e-12 and construction
physicality at 1e-8 absorb ODE roundoff while staying far from physical effects;
recorded-sample physicality is looser (1e-6) to absorb accumulated integration
error over long runs.
"""

# Maximum absolute asymmetry |V - V.T| tolerated at construction.
SYMMETRY_ATOL = 1e-12

# Symplectic eigenvalues must be >= 1/2 - this at construction.
PHYSICALITY_TOL = 1e-8

# Looser physicality bound applied to recorded integration samples and to
# normalized output-mode covariances.
SAMPLE_PHYSICALITY_TOL = 1e-6

# Sigma^2 - 4 det V values in [-this, 0) are clamped to 0; anything more
# negative is treated as a logic error.
DISCRIMINANT_CLAMP = 1e-12

# |S.T @ Omega @ S - Omega| bound asserted when building symplectic maps.
SYMPLECTIC_ATOL = 1e-10

# Diffusion matrices must have eigenvalues >= -this.
DIFFUSION_PSD_TOL = 1e-12

# Fixed-step integrator stiffness guard: dt <= STIFFNESS_FACTOR / max rate.
STIFFNESS_FACTOR = 0.01

# Hard cap on step count per integration.
MAX_STEPS = 10**8

# Instability abort: trace V exceeding this multiple of the initial trace.
TRACE_BLOWUP_FACTOR = 1e12

# Internal self-check of the double-integral oracle's commutator identity.
COMMUTATOR_SELFCHECK_TOL = 1e-9
