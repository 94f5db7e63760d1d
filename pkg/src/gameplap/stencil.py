"""Circular stencils: direction sets, n-level radii and sample assembly."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .grid import Grid, apply_weights, bilinear_weights


@dataclass(frozen=True)
class DirectionSet:
    """``4m`` unit vectors at angles ``i * pi / (2m)``, ``i = 0 .. 4m-1``.

    Quarter turns, negation and the axis reflections map the set onto
    itself exactly, not merely up to round-off.
    """

    m: int
    directions: np.ndarray

    @property
    def total(self) -> int:
        return 4 * self.m

    @property
    def dtheta(self) -> float:
        return math.pi / (2 * self.m)

    def __len__(self):
        return self.total


def make_directions(total: int) -> DirectionSet:
    """Evenly spaced unit directions starting at angle 0.

    Raises
    ------
    ValueError
        If ``total`` is not a positive multiple of 4.
    """
    if int(total) != total or total < 4 or total % 4:
        raise ValueError(f"number of directions must be a positive multiple of 4, got {total}")
    m = int(total) // 4
    dtheta = math.pi / (2 * m)
    quarter = np.empty((m, 2))
    for i in range(m):
        j = m - i
        if 2 * i < m:
            quarter[i] = (math.cos(i * dtheta), math.sin(i * dtheta))
        elif 2 * i == m:
            quarter[i] = (math.sqrt(0.5), math.sqrt(0.5))
        else:
            # mirror of the lower half about the diagonal
            quarter[i] = (math.sin(j * dtheta), math.cos(j * dtheta))
    c, s = quarter[:, 0], quarter[:, 1]
    dirs = np.concatenate([
        quarter,
        np.column_stack([-s, c]),
        np.column_stack([-c, -s]),
        np.column_stack([s, -c]),
    ])
    dirs.setflags(write=False)
    return DirectionSet(m, dirs)


@dataclass(frozen=True)
class CircleConfig:
    """n-level circles: ``alpha_j = beta * min(levels, d_j / h)``."""

    levels: int = 2
    beta: float = 0.99

    def __post_init__(self):
        if int(self.levels) != self.levels or self.levels < 1:
            raise ValueError(f"levels must be an integer >= 1, got {self.levels}")
        if not 0 < self.beta <= 1:
            raise ValueError(f"beta must lie in (0, 1], got {self.beta}")


def alpha_at(node, circle: CircleConfig, grid: Grid) -> float:
    """Radius multiplier ``alpha_j`` at interior node ``(i, k)``."""
    i, k = node
    steps = int(grid.steps_to_boundary[k, i])
    if steps == 0:
        raise ValueError(f"node {node} is on the boundary; no stencil there")
    return circle.beta * min(circle.levels, steps)


def alpha_field(grid: Grid, circle: CircleConfig) -> np.ndarray:
    """``alpha_j`` at every node, 0 on the boundary."""
    return circle.beta * np.minimum(circle.levels, grid.steps_to_boundary).astype(float)


def stencil_points(grid: Grid, node, dirs: DirectionSet, circle: CircleConfig) -> np.ndarray:
    """The ``4m`` sample points ``x_j + h * alpha_j * r_i`` around one node."""
    i, k = node
    r = grid.h * alpha_at(node, circle, grid)
    return np.array([grid.x[i], grid.y[k]]) + r * dirs.directions


def stencil_samples(grid: Grid, field: np.ndarray, node, dirs: DirectionSet,
                    circle: CircleConfig) -> np.ndarray:
    """Bilinearly interpolated field values on the stencil circle of one node."""
    index, weight = bilinear_weights(grid, stencil_points(grid, node, dirs, circle))
    return apply_weights(field, index, weight)


class StencilOperator:
    """Precomputed interpolation of a field onto every interior stencil.

    ``op(field)`` returns an ``(n_interior, 4m)`` array whose row ``r`` holds the
    samples for the interior node ``op.nodes[r]`` (flat row-major index).  The
    weights live in a sparse matrix; each sample is then clipped to the range of
    its cell's corners, as in :func:`stencil_samples`, so constants are
    reproduced exactly.
    """

    def __init__(self, grid: Grid, dirs: DirectionSet, circle: CircleConfig):
        self.grid = grid
        self.dirs = dirs
        self.circle = circle
        self.nodes = np.flatnonzero(grid.interior_mask.ravel())
        self.alpha = alpha_field(grid, circle).ravel()[self.nodes]
        X, Y = grid.coords
        centers = np.column_stack([X.ravel()[self.nodes], Y.ravel()[self.nodes]])
        radius = grid.h * self.alpha
        pts = centers[:, None, :] + radius[:, None, None] * dirs.directions[None, :, :]
        index, weight = bilinear_weights(grid, pts.reshape(-1, 2))
        n_samples = index.shape[0]
        rows = np.repeat(np.arange(n_samples), 4)
        W = sparse.csr_matrix((weight.ravel(), (rows, index.ravel())),
                              shape=(n_samples, grid.size))
        W.eliminate_zeros()
        self.matrix = W
        k, i = np.divmod(index[:, 0], grid.nx)
        self.cells = k * (grid.nx - 1) + i
        self.shape = (self.nodes.size, dirs.total)

    def __call__(self, field: np.ndarray) -> np.ndarray:
        u = np.asarray(field, dtype=float).reshape(self.grid.shape)
        vals = self.matrix @ u.ravel()
        a, b, c, d = u[:-1, :-1], u[:-1, 1:], u[1:, :-1], u[1:, 1:]
        lo = np.minimum(np.minimum(a, b), np.minimum(c, d)).ravel()
        hi = np.maximum(np.maximum(a, b), np.maximum(c, d)).ravel()
        np.maximum(vals, lo[self.cells], out=vals)
        np.minimum(vals, hi[self.cells], out=vals)
        return vals.reshape(self.shape)
