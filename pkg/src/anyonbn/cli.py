"""Command-line entry point.

Exit codes: 0 completed, 2 blowup_threshold, 3 dt_underflow, 64 config
error. --threads affects speed only, never results: the collision
quadrature accumulates each output node sequentially in a fixed order.
"""

import argparse
import sys

import numpy as np

from .collision import eval_Q, oracle_Q
from .config import parse_config
from .driver import (alpha_sweep, equilibrium_refinement_study, run,
                     uniform_bound_experiment, write_sweep_summary)
from .errors import ConfigError
from .grids import build_angular_grid, build_velocity_grid
from .physics import AlphaParam

EXIT_OK = 0
EXIT_BLOWUP = 2
EXIT_DT_UNDERFLOW = 3
EXIT_CONFIG = 64

TERMINATION_CODES = {
    "completed": EXIT_OK,
    "blowup_threshold": EXIT_BLOWUP,
    "dt_underflow": EXIT_DT_UNDERFLOW,
}


def _set_threads(n):
    if n is None:
        return
    import numba
    numba.set_num_threads(max(1, min(n, numba.config.NUMBA_NUM_THREADS)))


def _load_config(args):
    if args.config is None:
        raise ConfigError("--config PATH is required for this subcommand")
    cfg = parse_config(args.config)
    if args.out is not None:
        cfg.values["out.dir"] = args.out
    return cfg


def cmd_run(args):
    cfg = _load_config(args)
    report = run(cfg, out_dir=cfg["out.dir"])
    print(f"termination {report.termination} steps {report.steps} "
          f"t {report.final_state.t:.6g} sup {report.final_state.sup_norm:.6g}")
    return TERMINATION_CODES[report.termination]


def cmd_sweep_alpha(args):
    cfg = _load_config(args)
    result = alpha_sweep(cfg)
    import os
    os.makedirs(cfg["out.dir"], exist_ok=True)
    path = os.path.join(cfg["out.dir"], "sweep_summary.csv")
    write_sweep_summary(path, result)
    for a, b, d in result.distances:
        print(f"distance alpha {a:.6g} -> {b:.6g}: {d:.6g}")
    for fac in result.contraction_factors:
        print(f"contraction factor {fac:.4g}")
    if result.truncated_at is not None:
        print(f"comparison window truncated to {result.truncated_at} samples")
    print(f"summary written to {path}")
    return EXIT_OK


def cmd_uniform_bound(args):
    cfg = _load_config(args)
    table, spread = uniform_bound_experiment(cfg)
    for a, t in table:
        shown = f"{t:.6g}" if t is not None else "none"
        print(f"alpha {a:.6g} first crossing {shown}")
    print(f"spread {spread:.4g}")
    return EXIT_OK


def cmd_refine_equilibrium(args):
    cfg = _load_config(args)
    n_list, residuals, orders = equilibrium_refinement_study(
        cfg, n_list=args.n or (16, 32, 64))
    for i, (n, r) in enumerate(zip(n_list, residuals)):
        order = f" order {orders[i - 1]:.3f}" if i > 0 else ""
        print(f"n {n} residual {r:.6g}{order}")
    if args.out is not None:
        import os
        os.makedirs(cfg["out.dir"], exist_ok=True)
        path = os.path.join(cfg["out.dir"], "refinement.csv")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("n,residual\n")
            for n, r in zip(n_list, residuals):
                fh.write(f"{n},{r:.17g}\n")
        print(f"table written to {path}")
    return EXIT_OK


def cmd_validate_kernel(args):
    from .kernel import validate_kernel
    cfg = _load_config(args)
    _, ang, _ = cfg.grids()
    value = validate_kernel(cfg.kernel(), ang)
    print(f"angular kernel integral {value:.10g}")
    return EXIT_OK


def cmd_oracle_check(args):
    cfg = _load_config(args)
    vg = build_velocity_grid(cfg["grid.vmax"], 8)
    ang = build_angular_grid(8)
    spec = cfg.kernel()
    al = AlphaParam(cfg["run.alpha"])
    rng = np.random.default_rng(cfg["run.seed"])
    worst = 0.0
    for _ in range(args.slices):
        f = rng.random(vg.n_nodes)
        if al.alpha > 0:
            f *= 0.5 / al.alpha
        fast = eval_Q(f, vg, ang, spec, al)
        ref = oracle_Q(f, vg, ang, spec, al)
        scale = max(np.abs(ref.gain).max(), np.abs(ref.loss).max(), 1e-300)
        diff = max(np.abs(fast.gain - ref.gain).max(),
                   np.abs(fast.loss - ref.loss).max()) / scale
        worst = max(worst, diff)
    print(f"max relative deviation over {args.slices} slices: {worst:.3e}")
    return EXIT_OK if worst <= 1e-12 else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="anyonbn",
        description="Discrete-velocity solver for the anyon kinetic "
                    "equation in a periodic slab and its bosonic limit")
    parser.add_argument("--config", metavar="PATH", help="config file")
    parser.add_argument("--out", metavar="DIR", help="output directory")
    parser.add_argument("--threads", type=int, metavar="N",
                        help="worker threads (speed only, never results)")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("run", help="advance to t_end and write diagnostics")
    sub.add_parser("sweep-alpha", help="Cauchy-in-alpha distance table")
    sub.add_parser("uniform-bound", help="first 2^(L+1)-crossing per alpha")
    p = sub.add_parser("refine-equilibrium",
                       help="equilibrium residual vs velocity resolution")
    p.add_argument("--n", type=int, nargs="+", help="velocity resolutions")
    sub.add_parser("validate-kernel", help="angular kernel integral check")
    p = sub.add_parser("oracle-check",
                       help="compare fast and naive collision evaluation")
    p.add_argument("--slices", type=int, default=5,
                   help="number of random slices")
    return parser


COMMANDS = {
    "run": cmd_run,
    "sweep-alpha": cmd_sweep_alpha,
    "uniform-bound": cmd_uniform_bound,
    "refine-equilibrium": cmd_refine_equilibrium,
    "validate-kernel": cmd_validate_kernel,
    "oracle-check": cmd_oracle_check,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    _set_threads(args.threads)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
