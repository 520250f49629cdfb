"""Collision geometry and the statistics-dependent filling factor."""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegeneratePairError, OccupancyError


@dataclass(frozen=True)
class AlphaParam:
    """Exchange-statistics parameter; alpha = 0 is the boson limit.

    Restricted to [0, 1/2) so the closed-form maximum of the filling factor
    applies throughout. For alpha > 0 occupations must stay below 1/alpha.
    """

    alpha: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.alpha < 0.5:
            raise ConfigError(f"alpha must lie in [0, 1/2), got {self.alpha}")

    @property
    def ceiling(self):
        """Hard occupancy ceiling 1/alpha (inf for bosons)."""
        return np.inf if self.alpha == 0.0 else 1.0 / self.alpha


def impact_direction(v, v_star, theta):
    """Unit impact direction n = R(theta) u, with u the unit relative
    velocity and R a counterclockwise rotation, so cos(theta) = (u, n)."""
    v = np.asarray(v, dtype=float)
    v_star = np.asarray(v_star, dtype=float)
    diff = v - v_star
    d = float(np.hypot(diff[0], diff[1]))
    if d == 0.0:
        raise DegeneratePairError("impact direction requires v != v_star")
    ux, uy = diff[0] / d, diff[1] / d
    c, s = np.cos(theta), np.sin(theta)
    return np.array([c * ux - s * uy, s * ux + c * uy])


def deflect(v, v_star, n):
    """Exchange the n-component of the relative velocity:

        v' = v - (v - v_star, n) n,   v'_star = v_star + (v - v_star, n) n.

    Conserves momentum and energy exactly and is its own inverse for a
    fixed n (a reflection).
    """
    v = np.asarray(v, dtype=float)
    v_star = np.asarray(v_star, dtype=float)
    proj = (v[0] - v_star[0]) * n[0] + (v[1] - v_star[1]) * n[1]
    return v - proj * n, v_star + proj * n


def post_collision(v, v_star, theta):
    """Post-collision pair for impact direction n = R(theta) u.

    n and -n generate the same pair, so theta in [0, pi] covers every
    distinct collision once.
    """
    return deflect(v, v_star, impact_direction(v, v_star, theta))


def filling_factor(alpha, f_val):
    """F_alpha(f) = (1 - alpha f)^alpha (1 + (1 - alpha) f)^(1 - alpha).

    alpha may be an AlphaParam or a plain float. alpha = 0 returns exactly
    1 + f. Vectorized over f_val.
    """
    a = alpha.alpha if isinstance(alpha, AlphaParam) else float(alpha)
    f = np.asarray(f_val, dtype=float)
    if np.any(f < 0):
        raise OccupancyError("occupation values must be nonnegative")
    if a == 0.0:
        out = 1.0 + f
    else:
        if np.any(f >= 1.0 / a):
            raise OccupancyError(
                f"occupation at or above the ceiling 1/alpha = {1.0 / a}")
        out = (1.0 - a * f) ** a * (1.0 + (1.0 - a) * f) ** (1.0 - a)
    if out.ndim == 0:
        return float(out)
    return out


def filling_factor_max(alpha):
    """Closed-form maximum of F_alpha on [0, 1/alpha): (1/alpha - 1)^(1-2 alpha)."""
    a = alpha.alpha if isinstance(alpha, AlphaParam) else float(alpha)
    if not 0.0 < a < 0.5:
        raise ConfigError("closed-form maximum requires alpha in (0, 1/2)")
    return (1.0 / a - 1.0) ** (1.0 - 2.0 * a)
