"""Render figure recipes from photometrix CSV outputs.

Purely cosmetic and offline: reads the delimited files, never recomputes or
mutates anything, and fails loudly when a recipe references a column the
CSV does not carry.
"""

import csv
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


class MissingColumn(KeyError):
    pass


@dataclass(frozen=True)
class Curve:
    """One plotted line: x/y columns of a CSV, optionally split into one
    line per distinct value of a group column."""

    file: str
    x: str
    y: str
    label: str = ""
    group: tuple = ()
    style: dict = field(default_factory=dict)
    one_minus: bool = False  # plot 1 - y (efficiency -> inefficiency axes)


@dataclass(frozen=True)
class FigureRecipe:
    name: str
    curves: tuple
    xlabel: str
    ylabel: str
    output: str
    xscale: str = "linear"
    yscale: str = "linear"
    title: str = ""

    @property
    def inputs(self):
        return sorted({c.file for c in self.curves})


def load_table(path):
    with open(path, newline="") as f:
        reader = csv.reader(f)
        header = next(reader)
        rows = [row for row in reader]
    data = {}
    for i, name in enumerate(header):
        data[name] = np.array([float(row[i]) for row in rows])
    return data


def _column(table, name, path):
    if name not in table:
        raise MissingColumn(
            f"column {name!r} not found in {path} (has: {', '.join(table)})"
        )
    return table[name]


def render(recipe, data_dir, out_dir=None):
    """Render one recipe; returns the written image path."""
    data_dir = Path(data_dir)
    out_dir = Path(out_dir) if out_dir is not None else data_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    tables = {f: load_table(data_dir / f) for f in recipe.inputs}

    fig, ax = plt.subplots(figsize=(6.0, 4.2), dpi=150)
    for curve in recipe.curves:
        table = tables[curve.file]
        x = _column(table, curve.x, curve.file)
        y = _column(table, curve.y, curve.file)
        if curve.one_minus:
            y = 1.0 - y
        if curve.group:
            keys = [_column(table, g, curve.file) for g in curve.group]
            seen = []
            for combo in zip(*keys):
                if combo not in seen:
                    seen.append(combo)
            for combo in seen:
                mask = np.all(
                    [k == v for k, v in zip(keys, combo)], axis=0
                )
                tag = ", ".join(
                    f"{g}={v:g}" for g, v in zip(curve.group, combo)
                )
                label = f"{curve.label} ({tag})" if curve.label else tag
                ax.plot(x[mask], y[mask], label=label, **curve.style)
        else:
            ax.plot(x, y, label=curve.label or curve.y, **curve.style)
    ax.set_xscale(recipe.xscale)
    ax.set_yscale(recipe.yscale)
    ax.set_xlabel(recipe.xlabel)
    ax.set_ylabel(recipe.ylabel)
    if recipe.title:
        ax.set_title(recipe.title)
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    out_path = out_dir / recipe.output
    fig.savefig(out_path)
    plt.close(fig)
    return out_path
