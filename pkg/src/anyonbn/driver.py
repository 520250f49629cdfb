"""Run driver and the numerical experiments built on top of it."""

import os
import time
from dataclasses import dataclass, field

import numpy as np

from .collision import CollisionOutput, collision_pass, project_conservative
from .config import RunConfig
from .diagnostics import SupDensityAccumulator, collect_record
from .dynamics import (BlowupMonitor, State, check_blowup, step, step_fixed)
from .errors import ConfigError, DtUnderflow, StepRejected
from .grids import build_velocity_grid
from .initial import build_initial, validate_initial
from .io import write_diagnostics, write_snapshot
from .physics import AlphaParam


@dataclass
class RunReport:
    records: list
    termination: str            # completed | blowup_threshold | dt_underflow
    final_state: State
    steps: int
    wall_time: float
    L: int
    c0: float
    first_crossing: float = None   # first time sup f exceeded 2^(L+1)
    ladder_exponent: int = None


def run(config: RunConfig, out_dir=None, alpha=None):
    """Advance the configured problem to t_end or early termination.

    Writes diagnostics.csv and final_snapshot.txt when out_dir is given.
    alpha overrides run.alpha (used by the sweep experiments).
    """
    vg, ang, sg = config.grids()
    spec = config.kernel()
    ctrl = config.step_control()
    al = AlphaParam(alpha) if alpha is not None else config.alpha()
    f0 = build_initial(config["ic.kind"], config.ic_params(), vg, sg)
    L, c0 = validate_initial(f0, vg, al)
    t_end = config["run.t_end"]
    cadence = config["run.cadence"]
    lambdas = config["run.lambdas"]
    ladder = config["run.blowup_mode"] == "ladder"
    if config["run.blowup_mode"] not in ("ladder", "terminate"):
        raise ConfigError(
            f"run.blowup_mode must be ladder|terminate, "
            f"got {config['run.blowup_mode']!r}")

    state = State(f=f0, t=0.0, alpha=al, vg=vg, ang=ang, sg=sg)
    acc = SupDensityAccumulator.from_state(state)
    exponent = config["run.threshold_exponent"]
    if exponent is not None and 2.0 ** exponent <= state.sup_norm:
        raise ConfigError(
            f"run.threshold_exponent={exponent} puts the monitor rung "
            f"2^{exponent} at or below sup f0 = {state.sup_norm}")
    monitor = BlowupMonitor(L=L, threshold_exponent=exponent)
    records = [collect_record(state, spec, 0.0, acc, lambdas)]
    termination = "completed"
    first_crossing = None
    steps = 0
    t0 = time.perf_counter()
    tiny = 1e-12 * max(t_end, 1.0)
    while state.t < t_end - tiny:
        try:
            state, dt = step(state, spec, ctrl, dt_cap=t_end - state.t)
        except DtUnderflow:
            termination = "dt_underflow"
            break
        steps += 1
        acc.update(state)
        if steps % cadence == 0:
            records.append(collect_record(state, spec, dt, acc, lambdas))
        if check_blowup(monitor, state) == "threshold_crossed":
            if first_crossing is None:
                first_crossing = state.t
            if ladder:
                monitor.threshold_exponent += 1
            else:
                termination = "blowup_threshold"
                break
    wall = time.perf_counter() - t0
    report = RunReport(records=records, termination=termination,
                       final_state=state, steps=steps, wall_time=wall,
                       L=L, c0=c0, first_crossing=first_crossing,
                       ladder_exponent=monitor.threshold_exponent)
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        write_diagnostics(os.path.join(out_dir, "diagnostics.csv"),
                          records, lambdas, with_entropy=(al.alpha == 0.0))
        write_snapshot(os.path.join(out_dir, "final_snapshot.txt"), state)
    return report


def cumulative_bony(records):
    """Trapezoidal cumulative integral of the quadratic collision
    functional over the recorded time series: arrays (t, integral)."""
    t = np.array([r.t for r in records])
    b = np.array([r.bony for r in records])
    integral = np.concatenate(
        ([0.0], np.cumsum(0.5 * (b[1:] + b[:-1]) * np.diff(t))))
    return t, integral


def l1_distance(fa, fb, vg, sg):
    return float(np.abs(fa - fb).sum()) * vg.weight * sg.dx


def _fixed_dt_trajectory(config, alpha, dt, t_end):
    """States at the common time grid 0, dt, 2 dt, ... for one alpha.

    Fixed dt keeps the time grids of all sweep members aligned; a stage
    rejection truncates the trajectory (reported by the caller)."""
    vg, ang, sg = config.grids()
    spec = config.kernel()
    ctrl = config.step_control()
    al = AlphaParam(alpha)
    f0 = build_initial(config["ic.kind"], config.ic_params(), vg, sg)
    validate_initial(f0, vg, al)
    state = State(f=f0, t=0.0, alpha=al, vg=vg, ang=ang, sg=sg)
    snaps = [state.f]
    n_steps = int(round(t_end / dt))
    for _ in range(n_steps):
        try:
            state = step_fixed(state, dt, spec, ctrl)
        except StepRejected:
            break
        snaps.append(state.f)
    return snaps, vg, sg


@dataclass
class SweepResult:
    alphas: tuple
    dt: float
    # rows (alpha_a, alpha_b, sup-in-time L1 distance); consecutive pairs
    # first, then (alpha_i, 0) rows when 0 is part of the sweep.
    distances: list = field(default_factory=list)
    contraction_factors: list = field(default_factory=list)
    truncated_at: int = None    # common number of snapshots if truncated


def alpha_sweep(config: RunConfig, alphas=None):
    """Cauchy-in-alpha experiment: pairwise sup-in-time L1 distances
    between runs from identical data at decreasing alpha."""
    if alphas is None:
        alphas = config["sweep.alphas"]
    alphas = tuple(alphas)
    if any(not 0.0 <= a < 0.5 for a in alphas):
        raise ConfigError("sweep alphas must lie in [0, 1/2)")
    dt = config["sweep.dt"]
    t_end = config["run.t_end"]
    trajs = {}
    vg = sg = None
    for a in alphas:
        trajs[a], vg, sg = _fixed_dt_trajectory(config, a, dt, t_end)
    n_common = min(len(t) for t in trajs.values())
    expected = int(round(t_end / dt)) + 1
    result = SweepResult(
        alphas=alphas, dt=dt,
        truncated_at=None if n_common == expected else n_common)

    def sup_dist(a, b):
        return max(l1_distance(fa, fb, vg, sg)
                   for fa, fb in zip(trajs[a][:n_common], trajs[b][:n_common]))

    positive = [a for a in alphas if a > 0]
    for a, b in zip(positive, positive[1:]):
        result.distances.append((a, b, sup_dist(a, b)))
    if 0.0 in alphas:
        for a in positive:
            result.distances.append((a, 0.0, sup_dist(a, 0.0)))
    consec = [d for (a, b, d) in result.distances if b != 0.0]
    result.contraction_factors = [
        d0 / d1 if d1 > 0 else np.inf for d0, d1 in zip(consec, consec[1:])]
    return result


def write_sweep_summary(path, result: SweepResult):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("alpha_a,alpha_b,sup_l1_distance\n")
        for a, b, d in result.distances:
            fh.write(f"{a:.17g},{b:.17g},{d:.17g}\n")


def uniform_bound_experiment(config: RunConfig, alphas=None):
    """First time sup f exceeds 2^(L+1), per alpha, plus the max/min
    spread over the alphas that crossed (a finite-grid proxy for
    alpha-uniformity of the bounded interval)."""
    if alphas is None:
        alphas = [a for a in config["sweep.alphas"] if a > 0]
    table = []
    for a in alphas:
        report = run(config, alpha=a)
        table.append((a, report.first_crossing))
    crossed = [t for _, t in table if t is not None]
    spread = (max(crossed) / min(crossed)) if crossed else 1.0
    return table, spread


def equilibrium_refinement_study(config: RunConfig, n_list=(16, 32, 64)):
    """L1 residual of the projected collision rate on equilibrium data
    versus velocity resolution, with observed convergence orders."""
    if config["ic.kind"] != "bose_einstein":
        raise ConfigError("refinement study requires ic.kind=bose_einstein")
    al = config.alpha()
    if al.alpha != 0.0:
        raise ConfigError("refinement study requires alpha = 0")
    _, ang, sg = config.grids()
    spec = config.kernel()
    residuals = []
    for n in n_list:
        vg = build_velocity_grid(config["grid.vmax"], n)
        f0 = build_initial("bose_einstein", config.ic_params(), vg, sg)
        slice0 = f0[0]
        gain, loss, _, _ = collision_pass(slice0, vg, ang, spec, al)
        net = project_conservative(
            CollisionOutput(gain, loss, gain - loss), vg).net
        residuals.append(float(np.abs(net).sum()) * vg.weight)
    orders = [float(np.log(r0 / r1) / np.log(n1 / n0))
              for (r0, r1, n0, n1) in zip(residuals, residuals[1:],
                                          n_list, n_list[1:])]
    return list(n_list), residuals, orders
