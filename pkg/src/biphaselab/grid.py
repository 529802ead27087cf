"""Uniform radial grids on [0, 1] and scalar fields sampled on them."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class GridMismatchError(ValueError):
    """Two fields that must share a grid do not."""


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform discretization of [0, 1] with ``n`` intervals.

    Nodes are r_i = i/n for i = 0..n; endpoints are exact.
    """

    n: int
    dr: float
    nodes: np.ndarray = field(repr=False)

    def __eq__(self, other):
        return isinstance(other, Grid) and self.n == other.n

    def __hash__(self):
        return hash(self.n)


def make_grid(n: int) -> Grid:
    """Build the uniform grid with ``n`` intervals (n >= 8)."""
    n = int(n)
    if n < 8:
        raise ValueError(f"grid must have at least 8 intervals, got n={n}")
    nodes = np.linspace(0.0, 1.0, n + 1)
    nodes.setflags(write=False)
    return Grid(n=n, dr=1.0 / n, nodes=nodes)


@dataclass(frozen=True, eq=False)
class RadialField:
    """Scalar samples on the nodes of a :class:`Grid`."""

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.n + 1,):
            raise ValueError(
                f"field has {values.shape[0]} values for a grid with "
                f"{self.grid.n + 1} nodes")
        if not np.all(np.isfinite(values)):
            raise ValueError("field values must all be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)


def require_same_grid(*fields: RadialField) -> Grid:
    """Return the common grid of ``fields`` or raise :class:`GridMismatchError`."""
    grid = fields[0].grid
    for f in fields[1:]:
        if f.grid != grid:
            raise GridMismatchError(
                f"fields sampled on different grids (n={grid.n} vs n={f.grid.n})")
    return grid
