"""Figure rendering for casph sweep CSV output (strict CSV reader, no
physics recomputation)."""

from .reader import SchemaError, SweepTable, read_sweep_csv
from .render import FigureSpec, render

__all__ = ["FigureSpec", "render", "read_sweep_csv", "SweepTable",
           "SchemaError"]

__version__ = "0.1.0"
