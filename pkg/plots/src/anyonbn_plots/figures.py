"""Figure rendering: one image per call, batch only (Agg backend)."""

from dataclasses import dataclass, field

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .errors import InputError, MissingColumnError  # noqa: E402
from .readers import (read_delimited, read_refinement, read_snapshot,  # noqa: E402
                      read_sweep_summary)

CONSERVED_COLUMNS = ("mass", "mom1", "mom2", "energy")

FIGURE_KINDS = ("timeseries", "alpha_convergence", "refinement", "heatmap")


@dataclass
class FigureSpec:
    """What to draw: inputs, figure kind, output path, axis options."""

    kind: str
    inputs: tuple
    output: str
    columns: tuple = ()
    log_y: bool = False
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise InputError(f"unknown figure kind {self.kind!r}")
        if not self.inputs:
            raise InputError("figure needs at least one input path")


def _finish(fig, output):
    fig.tight_layout()
    fig.savefig(output, dpi=120)
    plt.close(fig)
    return output


def plot_timeseries(csv_path, columns, output):
    """One panel per column against t; conserved-moment panels are
    annotated with their max relative drift from the initial value."""
    cols, data = read_delimited(csv_path)
    if "t" not in cols:
        raise MissingColumnError(f"{csv_path}: no 't' column")
    columns = tuple(columns)
    if not columns:
        raise InputError("no columns requested")
    for c in columns:
        if c not in cols:
            raise MissingColumnError(
                f"{csv_path}: column {c!r} not present; available: "
                f"{', '.join(cols)}")
    t = data["t"]
    fig, axes = plt.subplots(len(columns), 1, sharex=True,
                             figsize=(6.4, 2.2 * len(columns)),
                             squeeze=False)
    marker = "o" if len(t) < 2 else None
    for ax, c in zip(axes[:, 0], columns):
        y = data[c]
        ax.plot(t, y, marker=marker)
        ax.set_ylabel(c)
        if c in CONSERVED_COLUMNS and len(y) and y[0] != 0:
            drift = np.abs(y - y[0]).max() / abs(y[0])
            ax.set_title(f"max relative drift {drift:.2e}", fontsize=8)
    axes[-1, 0].set_xlabel("t")
    return _finish(fig, output)


def fit_convergence_slope(alphas, distances):
    """Least-squares slope of log(distance) against log(alpha).

    Zero or constant distances give slope 0 (flat line) rather than an
    error; non-positive values cannot be placed on log axes and raise.
    """
    alphas = np.asarray(alphas, dtype=float)
    distances = np.asarray(distances, dtype=float)
    if len(alphas) < 2:
        raise InputError("need at least 2 sweep points to fit a slope")
    if np.any(alphas <= 0) or np.any(distances <= 0):
        raise InputError("log-log fit requires positive alphas/distances")
    x = np.log(alphas)
    y = np.log(distances)
    if np.allclose(y, y[0]):
        return 0.0
    return float(np.polyfit(x, y, 1)[0])


def plot_alpha_convergence(summary_path, output):
    """Consecutive pairwise distances vs alpha on log-log axes, with a
    slope-1 reference line and the fitted slope in the legend."""
    consecutive, to_limit = read_sweep_summary(summary_path)
    if len(consecutive) < 1 or len(consecutive) + len(to_limit) < 2:
        raise InputError(
            f"{summary_path}: need at least 2 sweep alphas to plot "
            "convergence")
    alphas = np.array([a for a, _, _ in consecutive])
    dists = np.array([d for _, _, d in consecutive])
    slope = fit_convergence_slope(alphas, dists)
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    ax.loglog(alphas, dists, "o-",
              label=f"consecutive distances (fitted slope {slope:.2f})")
    ref = dists[0] * (alphas / alphas[0])
    ax.loglog(alphas, ref, "k--", alpha=0.5, label="slope-1 reference")
    if to_limit:
        la = np.array([a for a, _, _ in to_limit])
        ld = np.array([d for _, _, d in to_limit])
        if np.all(ld > 0):
            ax.loglog(la, ld, "s-", label="distance to the limit run")
    ax.set_xlabel("alpha")
    ax.set_ylabel("sup-in-time L1 distance")
    ax.legend()
    return _finish(fig, output)


def plot_refinement(refinement_path, output):
    """Residual vs resolution on log-log axes with observed orders."""
    n, residuals = read_refinement(refinement_path)
    if len(n) < 1:
        raise InputError(f"{refinement_path}: empty refinement table")
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    marker = "o" if len(n) < 2 else "o-"
    if np.all(np.asarray(residuals) > 0) and len(n) >= 2:
        ax.loglog(n, residuals, marker)
        orders = [np.log(r0 / r1) / np.log(n1 / n0)
                  for r0, r1, n0, n1 in zip(residuals, residuals[1:],
                                            n, n[1:])]
        ax.set_title("observed orders: "
                     + ", ".join(f"{o:.2f}" for o in orders), fontsize=9)
    else:
        ax.plot(n, residuals, marker)
    ax.set_xlabel("velocity nodes per axis")
    ax.set_ylabel("L1 residual")
    return _finish(fig, output)


def plot_heatmap(snapshot_path, output, bins=None):
    """Speed marginal per spatial cell: row i is the |v|-histogram of
    cell i's distribution, weighted by occupancy."""
    header, f = read_snapshot(snapshot_path)
    n = header["n_per_axis"]
    vmax = header["vmax"]
    h = 2.0 * vmax / n
    centers = -vmax + h * (np.arange(n) + 0.5)
    vx, vy = np.meshgrid(centers, centers, indexing="ij")
    speed = np.hypot(vx, vy).ravel()
    if bins is None:
        bins = max(4, n // 2)
    edges = np.linspace(0.0, speed.max() + 1e-12, bins + 1)
    marg = np.empty((f.shape[0], bins))
    for i in range(f.shape[0]):
        marg[i], _ = np.histogram(speed, bins=edges,
                                  weights=f[i] * h * h)
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    im = ax.imshow(marg, origin="lower", aspect="auto",
                   extent=(0.0, edges[-1], 0.0, 1.0))
    fig.colorbar(im, ax=ax, label="mass in speed bin")
    ax.set_xlabel("|v|")
    ax.set_ylabel("x")
    ax.set_title(f"t = {header['t']:.6g}, alpha = {header['alpha']:.6g}",
                 fontsize=9)
    return _finish(fig, output)


def render(spec: FigureSpec):
    """Dispatch a FigureSpec to the matching renderer."""
    if spec.kind == "timeseries":
        return plot_timeseries(spec.inputs[0], spec.columns, spec.output)
    if spec.kind == "alpha_convergence":
        return plot_alpha_convergence(spec.inputs[0], spec.output)
    if spec.kind == "refinement":
        return plot_refinement(spec.inputs[0], spec.output)
    return plot_heatmap(spec.inputs[0], spec.output,
                        bins=spec.options.get("bins"))
