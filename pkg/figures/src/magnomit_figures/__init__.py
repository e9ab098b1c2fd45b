"""Panels from magnomit sweep CSVs: absorption, dispersion, transmission, delay."""

from .panels import (EXPECTED_HEADER, Curve, EmptySpec, FigureSpec,
                     SchemaMismatch, read_sweep_csv, render_panel)

__all__ = ["FigureSpec", "Curve", "render_panel", "read_sweep_csv",
           "SchemaMismatch", "EmptySpec", "EXPECTED_HEADER"]

__version__ = "0.1.0"
