"""Exception types shared across the engine.

The CLI maps these onto process exit codes: config errors -> 2,
physicality/numerical errors -> 3, instability -> 4.
"""


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration (bad key, value, or pairing)."""


class PhysicalityError(ValueError):
    """A covariance matrix violates the physicality bound (symplectic eigenvalue < 1/2 - tol)."""


class NumericalError(ArithmeticError):
    """A numerical domain violation that signals a logic error, not a state property."""


class StabilityError(RuntimeError):
    """Unbounded covariance growth detected (dynamically unstable parameter set)."""
