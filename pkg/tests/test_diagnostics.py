import math

import numpy as np
import pytest

from anyonbn.diagnostics import (SupDensityAccumulator, bony_functional,
                                 bulk_velocity, collect_record, entropy,
                                 moments, tail_mass)
from anyonbn.dynamics import State
from anyonbn.errors import UnsupportedDiagnostic
from anyonbn.grids import (build_angular_grid, build_spatial_grid,
                           build_velocity_grid)
from anyonbn.kernel import KernelSpec, eval_kernel
from anyonbn.physics import AlphaParam, filling_factor, post_collision

from conftest import gaussian_slice


def small_state(f=None, n_x=4, n=4, vmax=1.0, alpha=0.0):
    vg = build_velocity_grid(vmax, n)
    ang = build_angular_grid(4)
    sg = build_spatial_grid(n_x)
    if f is None:
        f = np.full((n_x, vg.n_nodes), 0.5)
    return State(f=f, t=0.0, alpha=AlphaParam(alpha), vg=vg, ang=ang, sg=sg)


def test_moments_constant_state():
    # f = c on a [-1,1]^2 velocity box: mass = 4c, odd moments vanish,
    # energy = c * integral of |v|^2 over the lattice
    st = small_state()
    mass, (m1, m2), energy = moments(st)
    assert mass == pytest.approx(0.5 * 4.0, rel=1e-14)
    assert m1 == pytest.approx(0.0, abs=1e-15)
    assert m2 == pytest.approx(0.0, abs=1e-15)
    lattice_e2 = st.vg.weight * float(
        (st.vg.vx ** 2 + st.vg.vy ** 2).sum())
    assert energy == pytest.approx(0.5 * lattice_e2, rel=1e-14)


def test_moments_single_node():
    st = small_state(f=np.zeros((4, 16)))
    f = np.zeros((4, 16))
    f[2, 5] = 2.0
    st = small_state(f=f)
    w = st.vg.weight * st.sg.dx
    mass, (m1, m2), energy = moments(st)
    assert mass == pytest.approx(2.0 * w, rel=1e-14)
    assert m1 == pytest.approx(2.0 * w * st.vg.vx[5], rel=1e-14)
    assert m2 == pytest.approx(2.0 * w * st.vg.vy[5], rel=1e-14)
    assert energy == pytest.approx(
        2.0 * w * (st.vg.vx[5] ** 2 + st.vg.vy[5] ** 2), rel=1e-14)


def test_bony_zero_cases(spec):
    st = small_state(f=np.zeros((4, 16)))
    assert bony_functional(st, spec) == 0.0
    st2 = small_state()
    assert bony_functional(st2, KernelSpec(B0=0.0)) == 0.0


def test_bony_positive_and_matches_naive_loop(bosons):
    # independent pure-Python evaluation of the |v - v_*|^2-weighted
    # quadratic functional on a tiny grid
    vg = build_velocity_grid(4.0, 8)
    ang = build_angular_grid(8)
    sg = build_spatial_grid(2)
    spec = KernelSpec(B0=1.0, gamma=0.1, gamma_prime=0.1)
    base = gaussian_slice(vg)
    f = np.vstack([base, 0.5 * base])
    st = State(f=f, t=0.0, alpha=bosons, vg=vg, ang=ang, sg=sg)

    def fill_at(fx, px, py):
        # bilinear with zero extension, matching the collision operator
        h = vg.h
        gx = (px + vg.vmax) / h - 0.5
        gy = (py + vg.vmax) / h - 0.5
        ix, iy = math.floor(gx), math.floor(gy)
        tx, ty = gx - ix, gy - iy
        n = vg.n_per_axis
        val = 0.0
        for dx_, wx in ((0, 1 - tx), (1, tx)):
            for dy_, wy in ((0, 1 - ty), (1, ty)):
                i, j = ix + dx_, iy + dy_
                if 0 <= i < n and 0 <= j < n:
                    val += wx * wy * fx[i * n + j]
        return val

    expected = 0.0
    for i in range(sg.n_x):
        fx = f[i]
        for j in range(vg.n_nodes):
            v = np.array([vg.vx[j], vg.vy[j]])
            for k in range(vg.n_nodes):
                vs = np.array([vg.vx[k], vg.vy[k]])
                d2 = float((v - vs) @ (v - vs))
                if d2 == 0.0:
                    continue
                for th, in zip(ang.theta):
                    B = eval_kernel(spec, math.sqrt(d2), th)
                    if B == 0.0:
                        continue
                    vp, vq = post_collision(v, vs, th)
                    Fp = 1.0 + fill_at(fx, vp[0], vp[1])
                    Fq = 1.0 + fill_at(fx, vq[0], vq[1])
                    expected += (d2 * B * fx[j] * fx[k] * Fp * Fq
                                 * vg.weight * vg.weight * ang.weight)
    expected *= sg.dx
    value = bony_functional(st, spec)
    assert value > 0
    assert value == pytest.approx(expected, rel=1e-12)


def test_tail_mass_examples():
    st = small_state()
    mass, _ = moments(st)[0], None
    full, w_full = tail_mass(st, 0.0)
    assert full == pytest.approx(mass, rel=1e-14)
    gone, w_gone = tail_mass(st, math.sqrt(2.0) * st.vg.vmax)
    assert gone == 0.0
    assert w_gone == 0.0
    with pytest.raises(ValueError):
        tail_mass(st, -1.0)


def test_tail_mass_monotone_in_lambda():
    vg = build_velocity_grid(4.0, 16)
    sg = build_spatial_grid(2)
    f = np.vstack([gaussian_slice(vg), gaussian_slice(vg)])
    st = State(f=f, t=0.0, alpha=AlphaParam(0.0), vg=vg,
               ang=build_angular_grid(4), sg=sg)
    vals = [tail_mass(st, lam)[0] for lam in (0.0, 1.0, 2.0, 3.0)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_weighted_tail_decays():
    vg = build_velocity_grid(4.0, 32)
    sg = build_spatial_grid(2)
    f = np.vstack([gaussian_slice(vg, sigma=0.8),
                   gaussian_slice(vg, sigma=0.8)])
    st = State(f=f, t=0.0, alpha=AlphaParam(0.0), vg=vg,
               ang=build_angular_grid(4), sg=sg)
    lam = 1.5
    _, w1 = tail_mass(st, lam)
    _, w2 = tail_mass(st, 2.0 * lam)
    assert w2 <= w1 / 1.5


def test_entropy_constant_state_closed_form():
    # n = 4 with vmax = n/2 = 2 gives unit node weights, so f = 1
    # everywhere yields N * (2 log 2 - 0) with N = 16 nodes, dx-averaged
    vg = build_velocity_grid(2.0, 4)
    assert vg.weight == pytest.approx(1.0)
    sg = build_spatial_grid(4)
    st = State(f=np.ones((4, 16)), t=0.0, alpha=AlphaParam(0.0), vg=vg,
               ang=build_angular_grid(4), sg=sg)
    assert entropy(st) == pytest.approx(16 * 2.0 * math.log(2.0), rel=1e-14)


def test_entropy_zero_state_and_alpha_guard():
    st = small_state(f=np.zeros((4, 16)))
    assert entropy(st) == 0.0
    st2 = small_state(alpha=0.25)
    with pytest.raises(UnsupportedDiagnostic):
        entropy(st2)


def test_entropy_invariant_under_exact_transport(bosons):
    from anyonbn.dynamics import advect
    vg = build_velocity_grid(1.0, 4)
    sg = build_spatial_grid(16)
    rng = np.random.default_rng(3)
    st = State(f=rng.random((16, 16)), t=0.0, alpha=bosons, vg=vg,
               ang=build_angular_grid(4), sg=sg)
    # commensurate dt: every shift is an exact permutation of cells
    out = advect(st, 1.0)
    assert entropy(out) == pytest.approx(entropy(st), rel=1e-14)


def test_entropy_monotone_in_occupation(bosons):
    vg = build_velocity_grid(1.0, 4)
    sg = build_spatial_grid(2)
    lo = State(f=np.full((2, 16), 0.5), t=0.0, alpha=bosons, vg=vg,
               ang=build_angular_grid(4), sg=sg)
    hi = State(f=np.full((2, 16), 1.5), t=0.0, alpha=bosons, vg=vg,
               ang=build_angular_grid(4), sg=sg)
    assert entropy(hi) > entropy(lo) > 0


def test_bulk_velocity():
    vg = build_velocity_grid(4.0, 32)
    sg = build_spatial_grid(2)
    f = np.vstack([gaussian_slice(vg, center=(0.3, 0.0)),
                   np.zeros(vg.n_nodes)])
    st = State(f=f, t=0.0, alpha=AlphaParam(0.0), vg=vg,
               ang=build_angular_grid(4), sg=sg)
    u1 = bulk_velocity(st)
    assert u1[0] == pytest.approx(0.3, abs=0.02)
    assert np.isnan(u1[1])


def test_sup_density_accumulator_monotone_and_matches_scan():
    rng = np.random.default_rng(7)
    vg = build_velocity_grid(1.0, 4)
    sg = build_spatial_grid(4)
    ang = build_angular_grid(4)
    frames = [rng.random((4, 16)) for _ in range(6)]
    states = [State(f=fr, t=float(i), alpha=AlphaParam(0.0), vg=vg, ang=ang,
                    sg=sg) for i, fr in enumerate(frames)]
    acc = SupDensityAccumulator.from_state(states[0])
    reads = [acc.read(states[0])]
    for st in states[1:]:
        acc.update(st)
        reads.append(acc.read(st))
    assert all(a <= b for a, b in zip(reads, reads[1:]))
    # store-and-scan oracle: max over all frames and x per node
    stack = np.stack(frames)
    expected = stack.max(axis=(0, 1)).sum() * vg.weight
    assert reads[-1] == pytest.approx(expected, rel=1e-14)


def test_collect_record_fields(spec, bosons):
    vg = build_velocity_grid(4.0, 8)
    sg = build_spatial_grid(2)
    f = np.vstack([gaussian_slice(vg), gaussian_slice(vg)])
    st = State(f=f, t=0.25, alpha=bosons, vg=vg, ang=build_angular_grid(8),
               sg=sg)
    acc = SupDensityAccumulator.from_state(st)
    rec = collect_record(st, spec, dt=0.01, acc=acc, lambdas=(1.0, 2.0))
    assert rec.t == 0.25 and rec.dt == 0.01
    assert rec.mass == pytest.approx(moments(st)[0], rel=1e-15)
    assert rec.sup_norm == st.sup_norm
    assert rec.entropy is not None
    assert set(rec.tail_mass) == {1.0, 2.0}
    assert rec.tail_mass[1.0] >= rec.tail_mass[2.0]
    assert rec.sup_density > 0
    # anyon record carries no entropy
    st_a = State(f=f, t=0.25, alpha=AlphaParam(0.125), vg=vg,
                 ang=build_angular_grid(8), sg=sg)
    rec_a = collect_record(st_a, spec, dt=0.01,
                           acc=SupDensityAccumulator.from_state(st_a),
                           lambdas=(1.0,))
    assert rec_a.entropy is None
