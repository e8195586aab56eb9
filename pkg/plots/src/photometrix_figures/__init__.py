"""Offline figure rendering for photometrix CSV outputs."""

__version__ = "0.1.0"

from .recipes import RECIPES
from .render import Curve, FigureRecipe, MissingColumn, load_table, render
