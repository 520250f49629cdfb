"""Velocity, angular and spatial grids with midpoint quadrature weights."""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class VelocityGrid:
    """Uniform cell-centered lattice on [-vmax, vmax]^2.

    Nodes are cell centers, each carrying the quadrature weight h^2, so the
    weights sum to (2*vmax)^2. n_per_axis is even, which keeps v = 0 off the
    lattice and the node set symmetric under v -> -v.
    """

    vmax: float
    n_per_axis: int
    h: float = field(init=False)
    vx: np.ndarray = field(init=False)   # shape (n_nodes,)
    vy: np.ndarray = field(init=False)
    weight: float = field(init=False)

    def __post_init__(self):
        h = 2.0 * self.vmax / self.n_per_axis
        axis = -self.vmax + h * (np.arange(self.n_per_axis) + 0.5)
        gx, gy = np.meshgrid(axis, axis, indexing="ij")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "vx", gx.ravel())
        object.__setattr__(self, "vy", gy.ravel())
        object.__setattr__(self, "weight", h * h)
        self.vx.setflags(write=False)
        self.vy.setflags(write=False)

    @property
    def n_nodes(self):
        return self.n_per_axis * self.n_per_axis

    @property
    def speed(self):
        return np.hypot(self.vx, self.vy)

    @property
    def nodes(self):
        return np.column_stack((self.vx, self.vy))


def build_velocity_grid(vmax, n_per_axis):
    """Build a velocity lattice; n_per_axis must be even and >= 4."""
    if vmax <= 0:
        raise ConfigError(f"vmax must be positive, got {vmax}")
    if n_per_axis < 4 or n_per_axis % 2 != 0:
        raise ConfigError(
            f"n_per_axis must be even and >= 4, got {n_per_axis}")
    return VelocityGrid(float(vmax), int(n_per_axis))


@dataclass(frozen=True)
class AngularGrid:
    """Midpoint rule on [0, pi]: n_theta nodes, each with weight pi/n_theta."""

    n_theta: int
    theta: np.ndarray = field(init=False)
    weight: float = field(init=False)

    def __post_init__(self):
        if self.n_theta < 1:
            raise ConfigError(f"n_theta must be >= 1, got {self.n_theta}")
        w = np.pi / self.n_theta
        nodes = w * (np.arange(self.n_theta) + 0.5)
        object.__setattr__(self, "theta", nodes)
        object.__setattr__(self, "weight", w)
        self.theta.setflags(write=False)


def build_angular_grid(n_theta):
    return AngularGrid(int(n_theta))


@dataclass(frozen=True)
class SpatialGrid:
    """Periodic cell-centered grid on [0, 1)."""

    n_x: int
    x: np.ndarray = field(init=False)
    dx: float = field(init=False)

    def __post_init__(self):
        if self.n_x < 1:
            raise ConfigError(f"n_x must be >= 1, got {self.n_x}")
        dx = 1.0 / self.n_x
        object.__setattr__(self, "x", dx * (np.arange(self.n_x) + 0.5))
        object.__setattr__(self, "dx", dx)
        self.x.setflags(write=False)


def build_spatial_grid(n_x):
    return SpatialGrid(int(n_x))
