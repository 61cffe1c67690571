"""Render publication-style figures from simulator output files.

The package consumes the simulator's CSV and resolved-config files as
plain data; it never imports the simulator or recomputes simulation
quantities. Every plotted number traces to an input column or to one of
the closed-form overlay curves in :mod:`scapeplot.overlays`.
"""

from __future__ import annotations

from scapeplot.figures import RenderResult, render
from scapeplot.readers import ReaderError
from scapeplot.spec import FigureKind, FigureSpec, SpecError, load_spec

__all__ = [
    "FigureKind",
    "FigureSpec",
    "ReaderError",
    "RenderResult",
    "SpecError",
    "load_spec",
    "render",
]
