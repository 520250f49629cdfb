"""Exception types shared across the solver."""


class ConfigError(Exception):
    """Invalid configuration value or malformed config file."""


class KernelDegenerateError(ConfigError):
    """Angular quadrature of the collision kernel is nonpositive."""


class DegeneratePairError(ValueError):
    """Collision geometry requested for v == v_star."""


class OccupancyError(ValueError):
    """Distribution value at or above the 1/alpha ceiling (alpha > 0)."""


class InvalidInitialData(ValueError):
    """Initial data violates positivity or integrability requirements."""


class DomainError(ValueError):
    """Input state violates its invariants (negative, non-finite, ...)."""


class StepRejected(Exception):
    """Tentative collision step left the admissible corridor.

    Carries the magnitude of the worst offending value so the caller can
    log it before halving dt.
    """

    def __init__(self, message, magnitude):
        super().__init__(message)
        self.magnitude = magnitude


class DtUnderflow(Exception):
    """Time step fell below dt_min while rejections persisted."""


class UnsupportedDiagnostic(ValueError):
    """Diagnostic requested outside its domain of definition."""


class FormatError(ValueError):
    """Malformed diagnostics/snapshot file."""
