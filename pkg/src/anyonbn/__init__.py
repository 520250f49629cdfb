"""Discrete-velocity solver for the anyon kinetic equation in a periodic
slab (1-D space, 2-D velocity) and its bosonic limit."""

from .grids import (build_angular_grid, build_spatial_grid,
                    build_velocity_grid)
from .kernel import KernelSpec, eval_kernel, validate_kernel
from .physics import AlphaParam, filling_factor, filling_factor_max, post_collision
from .collision import (CollisionOutput, collision_frequency, eval_Q,
                        oracle_Q, project_conservative)
from .dynamics import (BlowupMonitor, State, StepControl, advect,
                       check_blowup, collide, propose_dt, step, step_fixed)
from .diagnostics import (SupDensityAccumulator, bony_functional,
                          bulk_velocity, entropy, moments, tail_mass)
from .initial import (bose_einstein, build_initial, gaussian_bump, two_beam,
                      validate_initial)
from .config import RunConfig, from_mapping, parse_config
from .driver import (RunReport, alpha_sweep, cumulative_bony,
                     equilibrium_refinement_study, l1_distance, run,
                     uniform_bound_experiment)

__version__ = "0.1.0"
