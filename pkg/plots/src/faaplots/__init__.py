"""Publication-style figures from faacut benchmark output files."""

from .figures import (
    FAMILIES,
    PlotSpec,
    plot_depth_vs_dt,
    plot_ratio_vs_t,
    plot_runtime_extrapolation,
    plot_tstar_histogram,
    plot_tstar_vs_l,
    render,
)
from .io import SCHEMA_VERSION, read_aggregate, read_instances, read_records

__all__ = [
    "FAMILIES",
    "PlotSpec",
    "SCHEMA_VERSION",
    "plot_depth_vs_dt",
    "plot_ratio_vs_t",
    "plot_runtime_extrapolation",
    "plot_tstar_histogram",
    "plot_tstar_vs_l",
    "read_aggregate",
    "read_instances",
    "read_records",
    "render",
]
