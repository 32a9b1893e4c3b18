"""Figure rendering for the hbq experiment pipeline's CSV output."""

from .render import FigureJob, FIGURES, render

__version__ = "0.1.0"

__all__ = ["FigureJob", "FIGURES", "render"]
