"""Render figures from z2dfl's delimited output tables.

A pure consumer of the simulator's file formats: fidelity time series,
steady-state diagonal profiles, and alpha-sweep tables.
"""

__version__ = "0.1.0"

from .io import ParseError, read_table  # noqa: F401
from .render import KINDS, PlotJob, render  # noqa: F401
