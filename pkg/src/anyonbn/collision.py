"""Discrete collision operator: quadrature evaluation, naive oracle,
conservative moment projection, and the collision frequency.

The quadrature follows the gain/loss split

    gain_j = sum_{k,m} w_v w_th B(|v_j - v_k|, th_m) f(v') f(v'_*) F(f_j) F(f_k)
    loss_j = sum_{k,m} w_v w_th B(|v_j - v_k|, th_m) f_j f_k F(f(v')) F(f(v'_*))

with f at the off-grid post-collision velocities obtained by bilinear
interpolation (zero outside the lattice) and the filling factor applied to
the interpolated value. Reductions use compensated summation in a fixed
(k, m) order per output node, so results are bit-identical for any number
of worker threads.
"""

from dataclasses import dataclass

import numpy as np
from numba import njit, prange

from .errors import DomainError
from .grids import AngularGrid, VelocityGrid
from .kernel import KernelSpec, angular_mask
from .physics import AlphaParam, filling_factor


@dataclass(frozen=True)
class CollisionOutput:
    """Per-node gain/loss rates; net is the authoritative rate."""

    gain: np.ndarray
    loss: np.ndarray
    net: np.ndarray


def validate_slice(f, alpha: AlphaParam):
    f = np.asarray(f, dtype=float)
    if not np.all(np.isfinite(f)):
        raise DomainError("slice contains non-finite values")
    if np.any(f < 0):
        raise DomainError("slice contains negative values")
    if alpha.alpha > 0 and np.any(f >= alpha.ceiling):
        raise DomainError(
            f"slice reaches the occupancy ceiling 1/alpha = {alpha.ceiling}")
    return f


@njit(cache=True)
def _bilinear(f, px, py, n_axis, vmax, h, off_grid):
    # Cell-centered lattice; off-lattice stencil corners contribute the
    # off_grid value (0 in production, i.e. zero extension outside
    # [-vmax, vmax]^2; tests use it to emulate an untruncated field).
    gx = (px + vmax) / h - 0.5
    gy = (py + vmax) / h - 0.5
    ix0 = int(np.floor(gx))
    iy0 = int(np.floor(gy))
    tx = gx - ix0
    ty = gy - iy0
    val = 0.0
    for di in range(2):
        ii = ix0 + di
        wx = tx if di == 1 else 1.0 - tx
        for dj in range(2):
            jj = iy0 + dj
            wy = ty if dj == 1 else 1.0 - ty
            if 0 <= ii < n_axis and 0 <= jj < n_axis:
                val += wx * wy * f[ii * n_axis + jj]
            else:
                val += wx * wy * off_grid
    return val


@njit(cache=True)
def _fill(fv, alpha, use_filling):
    if not use_filling:
        return 1.0
    if alpha == 0.0:
        return 1.0 + fv
    return (1.0 - alpha * fv) ** alpha * (1.0 + (1.0 - alpha) * fv) ** (1.0 - alpha)


@njit(cache=True, parallel=True)
def _collision_pass(f, vx, vy, w_v, cos_t, sin_t, theta_ok, b_w,
                    gamma, alpha, use_filling, n_axis, vmax, h, off_grid):
    """One full quadrature pass. Returns (gain, loss, nu, bony_j).

    b_w[m] already carries B0 * b(theta_m) * w_theta * w_v. nu is the loss
    integral with f_j factored out; bony_j accumulates the |v - v_*|^2
    weighted loss-type integrand for the quadratic collision functional.
    """
    nv = f.shape[0]
    nt = cos_t.shape[0]
    gain = np.zeros(nv)
    loss = np.zeros(nv)
    nu = np.zeros(nv)
    bony = np.zeros(nv)
    F = np.empty(nv)
    for j in range(nv):
        F[j] = _fill(f[j], alpha, use_filling)
    for j in prange(nv):
        g_s = 0.0
        g_c = 0.0
        l_s = 0.0
        l_c = 0.0
        n_s = 0.0
        n_c = 0.0
        b_s = 0.0
        b_c = 0.0
        fj = f[j]
        Fj = F[j]
        for k in range(nv):
            dx = vx[j] - vx[k]
            dy = vy[j] - vy[k]
            d2 = dx * dx + dy * dy
            d = np.sqrt(d2)
            if d < gamma:
                continue
            ux = dx / d
            uy = dy / d
            fk = f[k]
            gFk = Fj * F[k]
            for m in range(nt):
                if not theta_ok[m]:
                    continue
                c = cos_t[m]
                s = sin_t[m]
                nx = c * ux - s * uy
                ny = s * ux + c * uy
                proj = d * c
                fp = _bilinear(f, vx[j] - proj * nx, vy[j] - proj * ny,
                               n_axis, vmax, h, off_grid)
                fq = _bilinear(f, vx[k] + proj * nx, vy[k] + proj * ny,
                               n_axis, vmax, h, off_grid)
                bw = b_w[m]
                g_term = bw * fp * fq * gFk
                nu_term = bw * fk * _fill(fp, alpha, use_filling) \
                    * _fill(fq, alpha, use_filling)
                l_term = fj * nu_term
                b_term = d2 * l_term

                y = g_term - g_c
                t = g_s + y
                g_c = (t - g_s) - y
                g_s = t

                y = l_term - l_c
                t = l_s + y
                l_c = (t - l_s) - y
                l_s = t

                y = nu_term - n_c
                t = n_s + y
                n_c = (t - n_s) - y
                n_s = t

                y = b_term - b_c
                t = b_s + y
                b_c = (t - b_s) - y
                b_s = t
        gain[j] = g_s
        loss[j] = l_s
        nu[j] = n_s
        bony[j] = b_s
    return gain, loss, nu, bony


def _pass_args(vg: VelocityGrid, ang: AngularGrid, spec: KernelSpec):
    cos_t = np.cos(ang.theta)
    sin_t = np.sin(ang.theta)
    theta_ok = angular_mask(spec, ang.theta)
    b_w = spec.B0 * spec.profile_values(ang.theta) * ang.weight * vg.weight
    return cos_t, sin_t, theta_ok, b_w


def collision_pass(f, vg, ang, spec, alpha, use_filling=True,
                   off_grid=0.0):
    """Raw quadrature arrays (gain, loss, nu, bony_j) for one slice."""
    f = validate_slice(f, alpha)
    if spec.B0 == 0.0:
        z = np.zeros(vg.n_nodes)
        return z, z.copy(), z.copy(), z.copy()
    cos_t, sin_t, theta_ok, b_w = _pass_args(vg, ang, spec)
    return _collision_pass(
        f, vg.vx, vg.vy, vg.weight, cos_t, sin_t, theta_ok, b_w,
        spec.gamma, alpha.alpha, use_filling,
        vg.n_per_axis, vg.vmax, vg.h, off_grid)


def eval_Q(f, vg, ang, spec, alpha, use_filling=True, off_grid=0.0):
    """Gain/loss split of the collision operator on one velocity slice."""
    gain, loss, _, _ = collision_pass(f, vg, ang, spec, alpha, use_filling,
                                      off_grid)
    return CollisionOutput(gain=gain, loss=loss, net=gain - loss)


def collision_frequency(f, vg, ang, spec, alpha):
    """Per-node rate nu_j: the loss integral with f_j factored out."""
    _, _, nu, _ = collision_pass(f, vg, ang, spec, alpha)
    return nu


def invariants_matrix(vg: VelocityGrid):
    """Collision invariants {1, v1, v2, |v|^2} as rows, shape (4, n_nodes)."""
    return np.vstack([
        np.ones(vg.n_nodes),
        vg.vx,
        vg.vy,
        vg.vx ** 2 + vg.vy ** 2,
    ])


def project_conservative(out: CollisionOutput, vg: VelocityGrid):
    """Remove the invariant components of net by weighted least squares.

    net' = net - sum_k lambda_k phi_k with lambda solving the 4x4 weighted
    Gram system, so the discrete mass/momentum/energy moments of net'
    vanish. Gain and loss are carried through unchanged.
    """
    phi = invariants_matrix(vg)
    gram = vg.weight * (phi @ phi.T)
    rhs = vg.weight * (phi @ out.net)
    lam = np.linalg.solve(gram, rhs)
    net = out.net - lam @ phi
    return CollisionOutput(gain=out.gain, loss=out.loss, net=net)


def oracle_Q(f, vg, ang, spec, alpha, use_filling=True, off_grid=0.0):
    """Naive reference evaluation of the collision operator.

    Plain triple loop in declaration order, no algebraic rearrangement,
    no compensated summation. Slow; for validation only.
    """
    import math

    f = validate_slice(f, alpha)
    n = vg.n_per_axis
    vmax, h, a = vg.vmax, vg.h, alpha.alpha
    vx, vy = vg.vx, vg.vy
    nv = vg.n_nodes

    def fill(val):
        if not use_filling:
            return 1.0
        if a == 0.0:
            return 1.0 + val
        return (1.0 - a * val) ** a * (1.0 + (1.0 - a) * val) ** (1.0 - a)

    def interp(px, py):
        gx = (px + vmax) / h - 0.5
        gy = (py + vmax) / h - 0.5
        ix0 = math.floor(gx)
        iy0 = math.floor(gy)
        tx = gx - ix0
        ty = gy - iy0
        val = 0.0
        for ii, wx in ((ix0, 1.0 - tx), (ix0 + 1, tx)):
            for jj, wy in ((iy0, 1.0 - ty), (iy0 + 1, ty)):
                if 0 <= ii < n and 0 <= jj < n:
                    val += wx * wy * f[ii * n + jj]
                else:
                    val += wx * wy * off_grid
        return val

    b_vals = spec.B0 * spec.profile_values(ang.theta)
    th_ok = angular_mask(spec, ang.theta)
    gain = np.zeros(nv)
    loss = np.zeros(nv)
    for j in range(nv):
        for k in range(nv):
            dx = vx[j] - vx[k]
            dy = vy[j] - vy[k]
            d = math.sqrt(dx * dx + dy * dy)
            if d < spec.gamma:
                continue
            ux, uy = dx / d, dy / d
            for m in range(ang.n_theta):
                if not th_ok[m]:
                    continue
                c = math.cos(ang.theta[m])
                s = math.sin(ang.theta[m])
                nx = c * ux - s * uy
                ny = s * ux + c * uy
                proj = d * c
                fp = interp(vx[j] - proj * nx, vy[j] - proj * ny)
                fq = interp(vx[k] + proj * nx, vy[k] + proj * ny)
                bw = b_vals[m] * ang.weight * vg.weight
                gain[j] += bw * fp * fq * fill(f[j]) * fill(f[k])
                loss[j] += bw * f[j] * f[k] * fill(fp) * fill(fq)
    return CollisionOutput(gain=gain, loss=loss, net=gain - loss)
