"""Batch figure rendering for the kinetic solver's file outputs.

Reads the solver's delimited diagnostics, sweep-summary, refinement and
snapshot files through independent parsers and renders static images.
"""

from .errors import InputError, MissingColumnError, SnapshotFormatError
from .figures import (plot_alpha_convergence, plot_heatmap, plot_refinement,
                      plot_timeseries)
from .readers import (read_delimited, read_refinement, read_snapshot,
                      read_sweep_summary)

__all__ = [
    "InputError", "MissingColumnError", "SnapshotFormatError",
    "plot_timeseries", "plot_alpha_convergence", "plot_refinement",
    "plot_heatmap",
    "read_delimited", "read_sweep_summary", "read_refinement",
    "read_snapshot",
]

__version__ = "0.1.0"
