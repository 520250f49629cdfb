"""Controlled quantities: conserved moments, sup-norm, quadratic collision
functional, sup-density accumulator, tail mass, bulk velocity, entropy."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .collision import collision_pass
from .dynamics import State
from .errors import UnsupportedDiagnostic
from .kernel import KernelSpec


@dataclass
class DiagnosticsRecord:
    t: float
    dt: float
    mass: float
    mom1: float
    mom2: float
    energy: float
    sup_norm: float
    bony: float
    entropy: Optional[float]       # bosons only, None otherwise
    tail_mass: dict                # lambda -> unweighted tail mass
    sup_density: float


def moments(state: State):
    """(mass, (mom1, mom2), energy): quadrature of f * {1, v, |v|^2}."""
    w = state.vg.weight * state.sg.dx
    col = state.f.sum(axis=0)      # spatial sum per velocity node
    mass = w * col.sum()
    mom1 = w * (col @ state.vg.vx)
    mom2 = w * (col @ state.vg.vy)
    energy = w * (col @ (state.vg.vx ** 2 + state.vg.vy ** 2))
    return float(mass), (float(mom1), float(mom2)), float(energy)


def bony_functional(state: State, spec: KernelSpec):
    """Quadratic collision functional: the |v - v_*|^2-weighted loss-type
    integral, summed over space, with the same interpolation conventions
    as the collision operator."""
    total = 0.0
    for i in range(state.sg.n_x):
        _, _, _, bony_j = collision_pass(
            state.f[i], state.vg, state.ang, spec, state.alpha)
        total += state.vg.weight * float(bony_j.sum())
    return total * state.sg.dx


def tail_mass(state: State, lam: float):
    """(mass, |v|-weighted mass) carried by velocities with |v| > lam."""
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    speed = state.vg.speed
    sel = speed > lam
    w = state.vg.weight * state.sg.dx
    col = state.f.sum(axis=0)
    m = w * float(col[sel].sum())
    wm = w * float((col[sel] * speed[sel]).sum())
    return m, wm


def entropy(state: State):
    """Boson entropy density integral (1+f) log(1+f) - f log f.

    Defined for alpha = 0 only; the integrand is extended by 0 at f = 0.
    """
    if state.alpha.alpha != 0.0:
        raise UnsupportedDiagnostic("entropy is defined for alpha = 0 only")
    f = state.f
    s = np.zeros_like(f)
    pos = f > 0
    fp = f[pos]
    s[pos] = (1.0 + fp) * np.log1p(fp) - fp * np.log(fp)
    return float(s.sum()) * state.vg.weight * state.sg.dx


def bulk_velocity(state: State):
    """Per-cell mean x-velocity u1; NaN where the cell mass vanishes."""
    dens = state.f.sum(axis=1)
    num = state.f @ state.vg.vx
    with np.errstate(invalid="ignore", divide="ignore"):
        u1 = np.where(dens > 0, num / np.where(dens > 0, dens, 1.0), np.nan)
    return u1


@dataclass
class SupDensityAccumulator:
    """Running pointwise max over time and space of f, per velocity node.

    Since the characteristics transform only permutes x at fixed v, the
    max over x of the transported distribution equals the max over x of f.
    """

    max_per_node: np.ndarray = None

    @classmethod
    def from_state(cls, state: State):
        return cls(max_per_node=state.f.max(axis=0).copy())

    def update(self, state: State):
        np.maximum(self.max_per_node, state.f.max(axis=0),
                   out=self.max_per_node)
        return self

    def read(self, state: State):
        """Velocity-quadrature of the accumulated sup density."""
        return float(self.max_per_node.sum()) * state.vg.weight


def collect_record(state: State, spec: KernelSpec, dt: float,
                   acc: SupDensityAccumulator, lambdas):
    mass, (m1, m2), energy = moments(state)
    ent = entropy(state) if state.alpha.alpha == 0.0 else None
    tails = {lam: tail_mass(state, lam)[0] for lam in lambdas}
    return DiagnosticsRecord(
        t=state.t, dt=dt, mass=mass, mom1=m1, mom2=m2, energy=energy,
        sup_norm=state.sup_norm,
        bony=bony_functional(state, spec),
        entropy=ent, tail_mass=tails,
        sup_density=acc.read(state))
