"""Pseudo-Maxwellian collision kernel with hard cutoffs.

B(|v - v_*|, theta) = B0 * b(theta) on the admissible set
{ |v - v_*| >= gamma,  gamma' <= |cos theta| <= 1 - gamma' }, zero elsewhere.
The default angular profile b is constant 1; any profile bounded by 1 may be
supplied as a callable of theta.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ConfigError, KernelDegenerateError
from .grids import AngularGrid


@dataclass(frozen=True)
class KernelSpec:
    B0: float = 1.0
    gamma: float = 0.1
    gamma_prime: float = 0.1
    profile: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        # B0 = 0 is allowed for pure-transport runs; validate_kernel flags
        # it as degenerate for actual collision configurations.
        if self.B0 < 0:
            raise ConfigError(f"B0 must be nonnegative, got {self.B0}")
        if self.gamma <= 0:
            raise ConfigError(f"gamma must be positive, got {self.gamma}")
        if not 0.0 < self.gamma_prime < 0.5:
            raise ConfigError(
                f"gamma_prime must lie in (0, 1/2), got {self.gamma_prime}")

    def profile_values(self, theta):
        """Angular profile b evaluated at theta (vectorized)."""
        theta = np.asarray(theta, dtype=float)
        if self.profile is None:
            return np.ones_like(theta)
        vals = np.asarray(self.profile(theta), dtype=float)
        if np.any(vals < 0) or np.any(vals > 1):
            raise ConfigError("angular profile must take values in [0, 1]")
        return vals


def angular_mask(spec, theta):
    """True where gamma' <= |cos theta| <= 1 - gamma'."""
    c = np.abs(np.cos(np.asarray(theta, dtype=float)))
    return (c >= spec.gamma_prime) & (c <= 1.0 - spec.gamma_prime)


def eval_kernel(spec, rel_speed, theta):
    """Kernel value at one (or an array of) (rel_speed, theta) pair(s).

    Total function: returns 0 outside the admissible set, never exceeds B0.
    """
    rel_speed = np.asarray(rel_speed, dtype=float)
    theta = np.asarray(theta, dtype=float)
    ok = (rel_speed >= spec.gamma) & angular_mask(spec, theta)
    vals = np.where(ok, spec.B0 * spec.profile_values(theta), 0.0)
    if vals.ndim == 0:
        return float(vals)
    return vals


def validate_kernel(spec, ang: AngularGrid):
    """Quadrature of the theta-integral of B at rel_speed >= gamma.

    The continuum hypothesis requires this integral to have a positive lower
    bound; a nonpositive discrete value means the angular grid does not
    resolve the admissible band (or the profile vanishes there).
    """
    vals = eval_kernel(spec, np.full(ang.n_theta, spec.gamma), ang.theta)
    integral = float(np.sum(vals) * ang.weight)
    if integral <= 0.0:
        raise KernelDegenerateError(
            "angular integral of B is nonpositive at this resolution: "
            f"{integral} (n_theta={ang.n_theta}, gamma_prime={spec.gamma_prime})")
    return integral
