"""Figure rendering for wavebandit analysis CSVs: mean/CI panels and
win-matrix heatmaps. Pure presentation; all statistics come from the CSVs."""

__version__ = "0.1.0"

from wavebandit_figures.panels import render_panels
from wavebandit_figures.schema import FigureSchemaError
from wavebandit_figures.winmatrix import render_winmatrix

__all__ = ["FigureSchemaError", "render_panels", "render_winmatrix"]
