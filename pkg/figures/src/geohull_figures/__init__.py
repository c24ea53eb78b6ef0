"""Renderer for slice CSVs produced by the geohull CLI."""

from .render import main, read_slice, render_slice

__all__ = ["main", "read_slice", "render_slice"]
__version__ = "0.1.0"
