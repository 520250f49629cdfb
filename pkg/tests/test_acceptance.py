"""End-to-end acceptance checks, one test per numbered criterion.

Each test prints a single PASS line on success; pytest reports a FAIL
line otherwise. Grid sizes are chosen so the full suite runs in a few
minutes on one core while preserving every asserted property.
"""

import math

import numpy as np
import pytest

from anyonbn.cli import main as cli_main
from anyonbn.collision import eval_Q, oracle_Q
from anyonbn.config import from_mapping
from anyonbn.driver import alpha_sweep, cumulative_bony, run
from anyonbn.dynamics import State, StepControl, advect, step_fixed
from anyonbn.grids import (build_angular_grid, build_spatial_grid,
                           build_velocity_grid)
from anyonbn.initial import gaussian_bump
from anyonbn.io import read_diagnostics
from anyonbn.kernel import KernelSpec
from anyonbn.physics import (AlphaParam, deflect, filling_factor,
                             filling_factor_max, impact_direction)


def report(n, text):
    print(f"PASS criterion {n}: {text}")


# ----------------------------------------------------------------- 1


def test_criterion_01_oracle_equivalence():
    vg = build_velocity_grid(4.0, 8)
    ang = build_angular_grid(8)
    spec = KernelSpec(B0=1.0, gamma=0.1, gamma_prime=0.1)
    alpha = AlphaParam(0.0)
    rng = np.random.default_rng(20240501)
    worst = 0.0
    for _ in range(20):
        f = rng.random(vg.n_nodes)
        fast = eval_Q(f, vg, ang, spec, alpha)
        ref = oracle_Q(f, vg, ang, spec, alpha)
        scale = max(np.abs(ref.gain).max(), np.abs(ref.loss).max())
        worst = max(worst,
                    np.abs(fast.gain - ref.gain).max() / scale,
                    np.abs(fast.loss - ref.loss).max() / scale)
    assert worst <= 1e-12
    report(1, f"fast vs naive collision quadrature agree; worst relative "
              f"deviation {worst:.2e} over 20 random slices")


# ----------------------------------------------------------------- 2


def test_criterion_02_collision_geometry():
    rng = np.random.default_rng(20240502)
    worst_cons = 0.0
    worst_inv = 0.0
    count = 0
    while count < 10_000:
        v = rng.uniform(-4.0, 4.0, 2)
        vs = rng.uniform(-4.0, 4.0, 2)
        if np.hypot(*(v - vs)) < 1e-9:
            continue
        theta = rng.uniform(0.0, np.pi)
        n = impact_direction(v, vs, theta)
        vp, vq = deflect(v, vs, n)
        worst_cons = max(
            worst_cons,
            np.abs(vp + vq - v - vs).max(),
            abs(vp @ vp + vq @ vq - v @ v - vs @ vs))
        v2, vs2 = deflect(vp, vq, n)
        worst_inv = max(worst_inv, np.abs(v2 - v).max(),
                        np.abs(vs2 - vs).max())
        count += 1
    assert worst_cons <= 1e-13
    assert worst_inv <= 1e-13
    report(2, f"10^4 random deflections conserve momentum/energy to "
              f"{worst_cons:.2e} and invert to {worst_inv:.2e}")


# ------------------------------------------------------------- 3 & 7


@pytest.fixture(scope="module")
def boson_reference_run():
    # dt_max well below the collision-CFL proposal pins dt, giving
    # exactly t_end / dt_max = 200 steps
    cfg = from_mapping({
        "ic.kind": "gaussian_bump",
        "ic.A": 1.0, "ic.sigma": 1.0, "ic.u0x": 0.3, "ic.eps": 0.2,
        "run.t_end": 0.5, "run.cadence": 20,
        "grid.n_x": 8, "grid.n_per_axis": 16, "grid.n_theta": 8,
        "step.dt_max": 0.0025,
    })
    return run(cfg)


def test_criterion_03_conservation(boson_reference_run):
    rep = boson_reference_run
    assert rep.termination == "completed"
    assert rep.steps == 200
    recs = rep.records
    mass0, energy0 = recs[0].mass, recs[0].energy
    scale = max(abs(recs[0].mom1), abs(recs[0].mom2), mass0)
    mass_drift = max(abs(r.mass - mass0) for r in recs) / mass0
    mom_drift = max(max(abs(r.mom1 - recs[0].mom1),
                        abs(r.mom2 - recs[0].mom2)) for r in recs) / scale
    energy_drift = max(abs(r.energy - energy0) for r in recs) / energy0
    assert mass_drift <= 1e-12
    assert mom_drift <= 1e-12
    assert energy_drift <= 1e-11
    report(3, f"200-step boson run: relative drifts mass {mass_drift:.2e}, "
              f"momentum {mom_drift:.2e}, energy {energy_drift:.2e}")


def test_criterion_07_quadratic_functional_growth(boson_reference_run):
    t, integral = cumulative_bony(boson_reference_run.records)
    T = 0.25
    i_T = float(np.interp(T, t, integral))
    i_2T = float(np.interp(2 * T, t, integral))
    ratio = i_2T / i_T
    assert i_T > 0
    assert ratio <= 3.0
    report(7, f"cumulative quadratic collision functional grows "
              f"sub-linearly: I(2T)/I(T) = {ratio:.3f} <= 3")


# ----------------------------------------------------------------- 4


def test_criterion_04_equilibrium_residual_order():
    from anyonbn.driver import equilibrium_refinement_study
    cfg = from_mapping({
        "ic.kind": "bose_einstein", "ic.T": 0.5, "ic.mu": -0.5,
        "run.t_end": 1.0, "grid.n_theta": 8,
    })
    n_list, residuals, orders = equilibrium_refinement_study(
        cfg, n_list=(16, 32, 64))
    assert residuals[0] > residuals[1] > residuals[2] > 0
    assert min(orders) >= 1.5
    report(4, f"equilibrium residuals {['%.3e' % r for r in residuals]} "
              f"over n={list(n_list)}; observed orders "
              f"{['%.2f' % o for o in orders]} >= 1.5")


# ----------------------------------------------------------------- 5


def test_criterion_05_filling_factor():
    worst = 0.0
    for a in (0.25, 0.125, 0.0625):
        grid = np.arange(0.0, 1.0 / a, 1e-6)
        scanned = filling_factor(a, grid).max()
        worst = max(worst, abs(scanned - filling_factor_max(a)))
    assert worst <= 1e-6

    # the scan interval [0, 8] must stay below the occupancy ceiling
    # 1/alpha, so the halving sequence starts at alpha = 1/16
    f = np.linspace(0.0, 8.0, 40001)
    sups = [np.abs(filling_factor(a, f) - (1.0 + f)).max()
            for a in (0.0625, 0.03125, 0.015625, 0.0078125)]
    factors = [s0 / s1 for s0, s1 in zip(sups, sups[1:])]
    assert all(1.7 <= fac <= 2.3 for fac in factors)
    report(5, f"scanned filling-factor maxima match the closed form to "
              f"{worst:.2e}; boson-limit gap halves per halving of alpha "
              f"(factors {['%.2f' % x for x in factors]})")


# ----------------------------------------------------------------- 6


def test_criterion_06_cauchy_in_alpha():
    cfg = from_mapping({
        "ic.kind": "gaussian_bump",
        "ic.A": 1.0, "ic.sigma": 1.0, "ic.u0x": 0.3, "ic.eps": 0.2,
        "run.t_end": 0.25, "sweep.dt": 0.0125,
        "grid.n_x": 8, "grid.n_per_axis": 16, "grid.n_theta": 8,
    })
    result = alpha_sweep(cfg, alphas=(2 ** -4, 2 ** -5, 2 ** -6,
                                      2 ** -7, 0.0))
    assert result.truncated_at is None
    consec = [d for (a, b, d) in result.distances if b != 0.0]
    assert all(d > 0 for d in consec)
    assert all(1.5 <= fac <= 2.5 for fac in result.contraction_factors)
    to_zero = [d for (a, b, d) in result.distances if b == 0.0]
    assert all(d0 > d1 for d0, d1 in zip(to_zero, to_zero[1:]))
    report(6, f"sup-in-time L1 distances contract per halving of alpha "
              f"(factors {['%.2f' % f for f in result.contraction_factors]}),"
              f" distance to the boson run monotone decreasing")


# ----------------------------------------------------------------- 8


def test_criterion_08_transport_exactness():
    # vmax=1, n=4 puts v1 in {+-0.25, +-0.75}; with n_x=16 and dt=0.5
    # every shift v1*dt/dx is an integer, and t=4 is a full period.
    vg = build_velocity_grid(1.0, 4)
    ang = build_angular_grid(4)
    sg = build_spatial_grid(16)
    rng = np.random.default_rng(20240508)
    f0 = rng.random((16, 16)) + 0.1
    st = State(f=f0, t=0.0, alpha=AlphaParam(0.0), vg=vg, ang=ang, sg=sg)
    ctrl = StepControl(dt_max=1.0)
    cur = st
    for _ in range(8):
        cur = step_fixed(cur, 0.5, KernelSpec(B0=0.0), ctrl)
    err = np.abs(cur.f - f0).max()
    assert err <= 1e-14

    generic = advect(st, 0.01737)
    mass_err = np.abs(generic.f.sum(axis=0) - f0.sum(axis=0)).max() \
        / f0.sum(axis=0).max()
    assert mass_err <= 1e-13
    report(8, f"collisionless full period reproduces the data to {err:.2e};"
              f" generic advection preserves per-row mass to {mass_err:.2e}")


# ----------------------------------------------------------------- 9


def test_criterion_09_l1_stability():
    from anyonbn.driver import l1_distance
    vg = build_velocity_grid(4.0, 16)
    ang = build_angular_grid(8)
    sg = build_spatial_grid(8)
    spec = KernelSpec(B0=1.0, gamma=0.1, gamma_prime=0.1)
    ctrl = StepControl(dt_max=0.05)
    f0 = gaussian_bump(vg, sg, amplitude=1.0, center=(0.3, 0.0), sigma=1.0,
                       modulation=0.2)
    pattern = 1.0 + 1e-3 * np.cos(3.0 * np.arange(vg.n_nodes))[None, :]
    g0 = f0 * pattern
    a = State(f=f0, t=0.0, alpha=AlphaParam(0.0), vg=vg, ang=ang, sg=sg)
    b = State(f=g0, t=0.0, alpha=AlphaParam(0.0), vg=vg, ang=ang, sg=sg)
    d0 = l1_distance(a.f, b.f, vg, sg)
    worst = d0
    dt = 0.0125
    for _ in range(20):    # t up to 0.25
        a = step_fixed(a, dt, spec, ctrl)
        b = step_fixed(b, dt, spec, ctrl)
        worst = max(worst, l1_distance(a.f, b.f, vg, sg))
    assert worst <= 10.0 * d0
    report(9, f"perturbed twin runs stay L1-close for t <= 0.25: "
              f"max distance {worst:.3e} <= 10 x initial {d0:.3e}")


# ---------------------------------------------------------------- 10


STRESS_CFG = """\
ic.kind = gaussian_bump
ic.A = 8.97
ic.sigma = 0.7
run.t_end = 0.05
run.cadence = 1
run.blowup_mode = terminate
run.threshold_exponent = 3
grid.n_x = 2
grid.n_per_axis = 8
grid.vmax = 2.0
grid.n_theta = 8
kernel.B0 = 1.0
step.dt_max = 0.05
"""


def test_criterion_10_blowup_instrumentation(tmp_path):
    cfg_path = tmp_path / "stress.cfg"
    cfg_path.write_text(STRESS_CFG)
    out = tmp_path / "stress_out"
    code = cli_main(["--config", str(cfg_path), "--out", str(out), "run"])
    assert code == 2
    _, data = read_diagnostics(out / "diagnostics.csv")
    tail = data["sup_norm"][-10:]
    assert len(tail) == 10
    assert np.all(np.diff(tail) > 0)

    ladder_cfg = from_mapping({
        "ic.kind": "gaussian_bump", "ic.A": 8.97, "ic.sigma": 0.7,
        "run.t_end": 0.01, "run.cadence": 1, "run.blowup_mode": "ladder",
        "run.threshold_exponent": 3,
        "grid.n_x": 2, "grid.n_per_axis": 8, "grid.vmax": 2.0,
        "grid.n_theta": 8, "kernel.B0": 1.0, "step.dt_max": 0.05,
    })
    rep = run(ladder_cfg)
    assert rep.termination == "completed"
    assert rep.first_crossing is not None
    assert rep.ladder_exponent == 4        # re-armed one rung up
    assert rep.final_state.sup_norm > 2.0 ** 3
    report(10, "stress run exits with code 2 and a monotone final sup-norm "
               "segment; ladder mode re-arms and continues past the rung")


# ---------------------------------------------------------------- 11


def test_criterion_11_thread_determinism(tmp_path):
    cfg_path = tmp_path / "det.cfg"
    cfg_path.write_text("""\
ic.kind = gaussian_bump
ic.A = 1.0
ic.sigma = 1.0
ic.u0x = 0.3
ic.eps = 0.2
run.t_end = 0.05
run.cadence = 1
grid.n_x = 4
grid.n_per_axis = 8
grid.n_theta = 8
step.dt_max = 0.0125
""")
    out1 = tmp_path / "threads1"
    out8 = tmp_path / "threads8"
    assert cli_main(["--config", str(cfg_path), "--out", str(out1),
                     "--threads", "1", "run"]) == 0
    assert cli_main(["--config", str(cfg_path), "--out", str(out8),
                     "--threads", "8", "run"]) == 0
    b1 = (out1 / "diagnostics.csv").read_bytes()
    b8 = (out8 / "diagnostics.csv").read_bytes()
    assert b1 == b8
    report(11, "diagnostics byte-identical across --threads 1 and "
               "--threads 8")
