"""Initial-data library and validation."""

import math

import numpy as np

from .errors import ConfigError, InvalidInitialData, OccupancyError
from .grids import SpatialGrid, VelocityGrid
from .physics import AlphaParam


def gaussian_bump(vg: VelocityGrid, sg: SpatialGrid, amplitude=1.0,
                  center=(0.0, 0.0), sigma=1.0, modulation=0.0):
    """A exp(-|v - u0|^2 / (2 sigma^2)) * (1 + eps cos(2 pi x))."""
    if amplitude <= 0 or sigma <= 0:
        raise ConfigError("gaussian_bump needs positive amplitude and sigma")
    if not 0.0 <= modulation < 1.0:
        raise ConfigError("modulation eps must lie in [0, 1)")
    vpart = amplitude * np.exp(
        -((vg.vx - center[0]) ** 2 + (vg.vy - center[1]) ** 2)
        / (2.0 * sigma ** 2))
    xpart = 1.0 + modulation * np.cos(2.0 * np.pi * sg.x)
    return xpart[:, None] * vpart[None, :]


def bose_einstein(vg: VelocityGrid, sg: SpatialGrid, T=0.5, mu=-0.5):
    """Equilibrium slice 1 / (exp((|v|^2 - mu)/T) - 1), replicated in x."""
    if T <= 0:
        raise ConfigError("bose_einstein requires T > 0")
    if mu >= 0:
        raise InvalidInitialData(
            "bose_einstein requires mu < 0 (pole on the grid otherwise)")
    e = (vg.vx ** 2 + vg.vy ** 2 - mu) / T
    vpart = 1.0 / np.expm1(e)
    return np.broadcast_to(vpart, (sg.n_x, vg.n_nodes)).copy()


def two_beam(vg, sg, amplitude=1.0, center=(1.0, 0.0), sigma=0.5,
             amplitude2=None, center2=None, sigma2=None, modulation=0.0):
    """Sum of two gaussian bumps; the second mirrors the first by default."""
    if amplitude2 is None:
        amplitude2 = amplitude
    if center2 is None:
        center2 = (-center[0], -center[1])
    if sigma2 is None:
        sigma2 = sigma
    return (gaussian_bump(vg, sg, amplitude, center, sigma, modulation)
            + gaussian_bump(vg, sg, amplitude2, center2, sigma2, modulation))


def validate_initial(f0, vg: VelocityGrid, alpha: AlphaParam):
    """Check positivity/ceiling and return (L, c0).

    L is the least integer with sup f0 <= 2^L; c0 is the velocity
    quadrature of sup_x f0.
    """
    f0 = np.asarray(f0, dtype=float)
    if not np.all(np.isfinite(f0)):
        raise InvalidInitialData("initial data contains non-finite values")
    if np.any(f0 <= 0.0):
        raise InvalidInitialData(
            "initial data must be strictly positive on the grid")
    if alpha.alpha > 0 and np.any(f0 >= alpha.ceiling):
        raise OccupancyError(
            f"initial data reaches the ceiling 1/alpha = {alpha.ceiling}")
    sup = float(f0.max())
    L = math.ceil(math.log2(sup))
    c0 = float(f0.max(axis=0).sum()) * vg.weight
    return L, c0


def build_initial(kind, params, vg, sg):
    """Dispatch on the configured initial-condition kind."""
    if kind == "gaussian_bump":
        return gaussian_bump(
            vg, sg,
            amplitude=params.get("A", 1.0),
            center=(params.get("u0x", 0.0), params.get("u0y", 0.0)),
            sigma=params.get("sigma", 1.0),
            modulation=params.get("eps", 0.0))
    if kind == "bose_einstein":
        return bose_einstein(vg, sg, T=params.get("T", 0.5),
                             mu=params.get("mu", -0.5))
    if kind == "two_beam":
        center2 = None
        if "u0x2" in params or "u0y2" in params:
            center2 = (params.get("u0x2", 0.0), params.get("u0y2", 0.0))
        return two_beam(
            vg, sg,
            amplitude=params.get("A", 1.0),
            center=(params.get("u0x", 1.0), params.get("u0y", 0.0)),
            sigma=params.get("sigma", 0.5),
            amplitude2=params.get("A2"),
            center2=center2,
            sigma2=params.get("sigma2"),
            modulation=params.get("eps", 0.0))
    raise ConfigError(f"unknown initial condition kind: {kind!r}")
