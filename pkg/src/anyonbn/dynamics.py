"""Time integration: semi-Lagrangian transport, Strang splitting with a
Heun collision step, adaptive dt control and blow-up monitoring.

The collision sub-step applies the conservative moment projection to the
quadrature rate and then restores positivity by clipping the (small)
negative tail values and removing the clipped mass/momentum/energy through
an f-weighted redistribution over the bulk. Both corrections annihilate
the four collision invariants exactly, so accepted steps conserve the
discrete moments to solve precision while keeping f >= 0 pointwise.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .collision import (CollisionOutput, collision_pass, invariants_matrix,
                        project_conservative)
from .errors import ConfigError, DomainError, DtUnderflow, StepRejected
from .grids import AngularGrid, SpatialGrid, VelocityGrid
from .kernel import KernelSpec
from .physics import AlphaParam


@dataclass(frozen=True)
class State:
    """Distribution on the slab at one time: f[i, j] at (x_i, v_j)."""

    f: np.ndarray          # shape (n_x, n_nodes)
    t: float
    alpha: AlphaParam
    vg: VelocityGrid
    ang: AngularGrid
    sg: SpatialGrid

    def __post_init__(self):
        f = np.asarray(self.f, dtype=float)
        if f.shape != (self.sg.n_x, self.vg.n_nodes):
            raise DomainError(
                f"state shape {f.shape} does not match grids "
                f"({self.sg.n_x}, {self.vg.n_nodes})")
        if not np.all(np.isfinite(f)):
            raise DomainError("state contains non-finite values")
        if np.any(f < 0):
            raise DomainError("state contains negative values")
        if self.alpha.alpha > 0 and np.any(f >= self.alpha.ceiling):
            raise DomainError("state reaches the 1/alpha ceiling")
        if self.t < 0:
            raise DomainError("time must be nonnegative")
        object.__setattr__(self, "f", f)
        f.setflags(write=False)

    @property
    def sup_norm(self):
        return float(self.f.max())


@dataclass(frozen=True)
class StepControl:
    cfl_collision: float = 0.2
    dt_min: float = 1e-8
    dt_max: float = 0.05
    ceiling_margin: float = 1e-6
    # Largest tolerated clipped-mass fraction per collision stage before the
    # step is rejected as a genuine loss of the 0 <= f < 1/alpha corridor.
    clip_tol: float = 0.05

    def __post_init__(self):
        if not 0 < self.dt_min <= self.dt_max:
            raise ConfigError("need 0 < dt_min <= dt_max")
        if not 0 < self.cfl_collision <= 1:
            raise ConfigError("need 0 < cfl_collision <= 1")
        if not 0 < self.ceiling_margin < 1:
            raise ConfigError("need 0 < ceiling_margin < 1")


@dataclass
class BlowupMonitor:
    """Doubling-ladder watchdog on the sup-norm.

    Initialized with the least L such that sup f0 <= 2^L; flags a crossing
    whenever sup f exceeds 2^threshold_exponent (default L + 1). In ladder
    mode the driver re-arms by raising the exponent one notch per crossing.
    """

    L: int
    threshold_exponent: int = None
    history: list = field(default_factory=list)

    def __post_init__(self):
        if self.threshold_exponent is None:
            self.threshold_exponent = self.L + 1
        if 2.0 ** self.threshold_exponent <= 0:
            raise ConfigError("threshold must be positive")

    @property
    def threshold(self):
        return 2.0 ** self.threshold_exponent


def check_blowup(monitor: BlowupMonitor, state: State):
    """Returns 'threshold_crossed' when sup f exceeds the current rung."""
    sup = state.sup_norm
    monitor.history.append(sup)
    if sup > monitor.threshold:
        return "threshold_crossed"
    return "ok"


def advect(state: State, dt: float) -> State:
    """Free transport: shift each velocity row periodically by v1 * dt.

    Periodic linear interpolation; integer-cell shifts are exact rolls and
    every shift preserves the per-row spatial mass (the interpolation
    matrix is circulant and doubly stochastic).
    """
    if dt == 0.0:
        return replace(state, t=state.t)
    n_x = state.sg.n_x
    shift = state.vg.vx * dt / state.sg.dx
    i0 = np.floor(shift).astype(np.int64)
    frac = shift - i0
    rows = np.arange(n_x)[:, None]
    base = (rows - i0[None, :]) % n_x
    upper = (base - 1) % n_x
    cols = np.broadcast_to(np.arange(state.vg.n_nodes)[None, :], base.shape)
    f_new = (1.0 - frac)[None, :] * state.f[base, cols] \
        + frac[None, :] * state.f[upper, cols]
    return replace(state, f=f_new, t=state.t + dt)


def _clip_redistribute(g, vg: VelocityGrid, clip_tol: float):
    """Zero out negative values, restoring the moments from the bulk.

    The clipped moments are removed through an f-weighted combination of
    the collision invariants, so the correction vanishes where f vanishes
    and is a tiny relative change on the bulk. Rejects (StepRejected) if
    the clipped mass fraction exceeds clip_tol or the redistribution would
    itself break positivity.
    """
    neg = g < 0.0
    if not np.any(neg):
        return g
    clipped = np.where(neg, -g, 0.0)
    total = float(g.sum())
    clip_mass = float(clipped.sum())
    if total <= 0.0 or clip_mass > clip_tol * (total + clip_mass):
        raise StepRejected("collision stage left the positivity corridor",
                           magnitude=float(g.min()))
    g_pos = np.where(neg, 0.0, g)
    phi = invariants_matrix(vg)
    defect = phi @ (vg.weight * clipped)          # moments added by clipping
    gram = phi @ (vg.weight * g_pos[None, :] * phi).T
    try:
        mu = np.linalg.solve(gram, defect)
    except np.linalg.LinAlgError:
        raise StepRejected("degenerate redistribution system",
                           magnitude=float(g.min()))
    scale = mu @ phi
    if np.any(scale >= 1.0):
        raise StepRejected("redistribution would break positivity",
                           magnitude=float(g.min()))
    return g_pos * (1.0 - scale)


def _projected_net(f_cell, state: State, spec: KernelSpec, use_filling=True):
    gain, loss, _, _ = collision_pass(
        f_cell, state.vg, state.ang, spec, state.alpha, use_filling)
    out = CollisionOutput(gain=gain, loss=loss, net=gain - loss)
    return project_conservative(out, state.vg).net


def collide(state: State, dt: float, spec: KernelSpec,
            ctrl: StepControl = StepControl()) -> State:
    """Heun step of the space-homogeneous collision dynamics per cell.

    Leaves t unchanged: within the Strang step the clock is advanced by
    the two advection half-steps, which already cover the full dt.
    """
    alpha = state.alpha
    ceiling = (1.0 - ctrl.ceiling_margin) * alpha.ceiling \
        if alpha.alpha > 0 else np.inf
    f_new = np.empty_like(state.f)
    for i in range(state.sg.n_x):
        f0 = state.f[i]
        k1 = _projected_net(f0, state, spec)
        f1 = _clip_redistribute(f0 + dt * k1, state.vg, ctrl.clip_tol)
        if f1.max() > ceiling:
            raise StepRejected("predictor breached the occupancy ceiling",
                               magnitude=float(f1.max()))
        k2 = _projected_net(f1, state, spec)
        f2 = _clip_redistribute(f0 + 0.5 * dt * (k1 + k2),
                                state.vg, ctrl.clip_tol)
        if f2.max() > ceiling:
            raise StepRejected("corrector breached the occupancy ceiling",
                               magnitude=float(f2.max()))
        f_new[i] = f2
    return replace(state, f=f_new)


def propose_dt(state: State, spec: KernelSpec, ctrl: StepControl) -> float:
    """CFL-style proposal from the collision frequency, ceiling-aware."""
    dt = ctrl.dt_max
    nu_max = 0.0
    net_max_over_head = 0.0
    head = (1.0 - ctrl.ceiling_margin) * state.alpha.ceiling \
        if state.alpha.alpha > 0 else np.inf
    for i in range(state.sg.n_x):
        gain, loss, nu, _ = collision_pass(
            state.f[i], state.vg, state.ang, spec, state.alpha)
        nu_max = max(nu_max, float(nu.max()))
        if np.isfinite(head):
            net = project_conservative(
                CollisionOutput(gain, loss, gain - loss), state.vg).net
            headroom = np.maximum(head - state.f[i], 1e-300)
            pos = net > 0
            if np.any(pos):
                net_max_over_head = max(
                    net_max_over_head,
                    float((net[pos] / headroom[pos]).max()))
    if nu_max > 0:
        dt = min(dt, ctrl.cfl_collision / nu_max)
    if net_max_over_head > 0:
        dt = min(dt, 1.0 / net_max_over_head)
    return max(dt, ctrl.dt_min)


def step(state: State, spec: KernelSpec, ctrl: StepControl, dt_cap=None):
    """One Strang step advect(dt/2) o collide(dt) o advect(dt/2).

    dt starts from the CFL proposal (optionally capped, e.g. to land on
    t_end) and halves on rejected collision stages; below dt_min the step
    signals loss of the admissible corridor. Returns (new_state, dt_used).
    """
    dt = propose_dt(state, spec, ctrl)
    if dt_cap is not None:
        dt = min(dt, dt_cap)
    while True:
        try:
            s1 = advect(state, 0.5 * dt)
            s2 = collide(s1, dt, spec, ctrl)
            s3 = advect(s2, 0.5 * dt)
            return s3, dt
        except StepRejected:
            dt *= 0.5
            if dt < ctrl.dt_min:
                raise DtUnderflow(
                    f"dt underflow below dt_min={ctrl.dt_min} at t={state.t}")


def step_fixed(state: State, dt: float, spec: KernelSpec,
               ctrl: StepControl = StepControl()):
    """Strang step with a prescribed dt (no adaptivity, no halving)."""
    s1 = advect(state, 0.5 * dt)
    s2 = collide(s1, dt, spec, ctrl)
    return advect(s2, 0.5 * dt)
