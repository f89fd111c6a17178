"""Figure regeneration from exported simulation run directories.

Consumes only the documented text formats (timeseries.csv, snapshot_*.csv,
summary.txt); the simulator package itself is never imported, so the two
components stay decoupled behind the file formats.
"""

__version__ = "0.1.0"

from .data import (
    MissingDataError,
    load_snapshot,
    load_summary_phases,
    load_summary_ratios,
    load_timeseries,
)
from .figures import FIGURE_IDS, FigureSpec, figure_data, render

__all__ = [
    "FIGURE_IDS",
    "FigureSpec",
    "MissingDataError",
    "figure_data",
    "load_snapshot",
    "load_summary_phases",
    "load_summary_ratios",
    "load_timeseries",
    "render",
]
