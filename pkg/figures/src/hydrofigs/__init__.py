"""Figure regeneration for hydrocasimir CSV outputs."""

__version__ = "0.1.0"

from .render import FigureSpec, SchemaError, FIGURE_IDS, read_table, render

__all__ = ["FigureSpec", "SchemaError", "FIGURE_IDS", "read_table", "render"]
