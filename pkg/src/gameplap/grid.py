"""Uniform rectangular node grids and monotone bilinear interpolation.

Nodal fields are plain ``(ny, nx)`` float arrays, so ``field.ravel()`` gives
the row-major node ordering ``j = k * nx + i`` (``i`` along x, ``k`` along y).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

#: relative slack in the equal-spacing check
SPACING_RTOL = 1e-10
#: sample points this far outside (in units of h) are snapped back onto the domain
EDGE_SLACK = 1e-9
#: fractional cell offsets closer than this to a grid line are rounded onto it
SNAP = 1e-12


class OutsideDomainError(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    """Uniform grid with square cells on ``[xmin, xmax] x [ymin, ymax]``."""

    xmin: float
    xmax: float
    ymin: float
    ymax: float
    nx: int
    ny: int
    h: float

    @property
    def shape(self):
        return (self.ny, self.nx)

    @property
    def size(self):
        return self.nx * self.ny

    @property
    def bounds(self):
        return (self.xmin, self.xmax, self.ymin, self.ymax)

    @property
    def diameter(self) -> float:
        return math.hypot(self.xmax - self.xmin, self.ymax - self.ymin)

    @cached_property
    def x(self) -> np.ndarray:
        return self.xmin + self.h * np.arange(self.nx)

    @cached_property
    def y(self) -> np.ndarray:
        return self.ymin + self.h * np.arange(self.ny)

    @cached_property
    def coords(self):
        """``(X, Y)`` node coordinate arrays of shape ``(ny, nx)``."""
        X, Y = np.meshgrid(self.x, self.y)
        X.setflags(write=False)
        Y.setflags(write=False)
        return X, Y

    @cached_property
    def steps_to_boundary(self) -> np.ndarray:
        """Grid-line distance to the boundary in units of ``h`` (0 on the boundary)."""
        i = np.arange(self.nx)
        k = np.arange(self.ny)
        di = np.minimum(i, self.nx - 1 - i)
        dk = np.minimum(k, self.ny - 1 - k)
        d = np.minimum(di[None, :], dk[:, None])
        d.setflags(write=False)
        return d

    @property
    def distance_to_boundary(self) -> np.ndarray:
        return self.h * self.steps_to_boundary

    @cached_property
    def boundary_mask(self) -> np.ndarray:
        m = self.steps_to_boundary == 0
        m.setflags(write=False)
        return m

    @property
    def interior_mask(self) -> np.ndarray:
        return ~self.boundary_mask

    def node_class(self, i: int, k: int):
        """``(kind, d)`` for node ``(i, k)``; ``kind`` is ``"interior"`` or ``"boundary"``."""
        steps = int(self.steps_to_boundary[k, i])
        return ("boundary" if steps == 0 else "interior", steps * self.h)

    def sample(self, func) -> np.ndarray:
        """Evaluate a vectorised ``func(x, y)`` at every node."""
        X, Y = self.coords
        return np.broadcast_to(np.asarray(func(X, Y), dtype=float), self.shape).copy()

    def nearest_node(self, point):
        i = int(round((point[0] - self.xmin) / self.h))
        k = int(round((point[1] - self.ymin) / self.h))
        return min(max(i, 0), self.nx - 1), min(max(k, 0), self.ny - 1)

    def contains(self, point) -> bool:
        slack = EDGE_SLACK * self.h
        return (self.xmin - slack <= point[0] <= self.xmax + slack
                and self.ymin - slack <= point[1] <= self.ymax + slack)


def build_grid(bounds, nx: int, ny: int | None = None) -> Grid:
    """Build a uniform grid on ``bounds = (xmin, xmax, ymin, ymax)``.

    Raises
    ------
    ValueError
        If the bounds are degenerate, either count is below 3, the cells
        would not be square, or the spacing is not in ``(0, 1)``.

    Examples
    --------
    >>> build_grid((-1, 1, -1, 1), 41, 41).h
    0.05
    """
    if ny is None:
        ny = nx
    xmin, xmax, ymin, ymax = (float(b) for b in bounds)
    if not (xmax > xmin and ymax > ymin):
        raise ValueError(f"degenerate bounds {bounds!r}")
    if int(nx) != nx or int(ny) != ny or nx < 3 or ny < 3:
        raise ValueError(f"node counts must be integers >= 3, got nx={nx}, ny={ny}")
    nx, ny = int(nx), int(ny)
    hx = (xmax - xmin) / (nx - 1)
    hy = (ymax - ymin) / (ny - 1)
    if abs(hx - hy) > SPACING_RTOL * max(hx, hy):
        raise ValueError(f"cells must be square: hx={hx!r} vs hy={hy!r}")
    if not 0 < hx < 1:
        raise ValueError(f"grid spacing must lie in (0, 1), got h={hx!r}")
    return Grid(xmin, xmax, ymin, ymax, nx, ny, hx)


# ------------------------------------------------------------------ interpolation


def _cell_coords(grid: Grid, px: np.ndarray, py: np.ndarray):
    slack = EDGE_SLACK * grid.h
    outside = ((px < grid.xmin - slack) | (px > grid.xmax + slack)
               | (py < grid.ymin - slack) | (py > grid.ymax + slack))
    if np.any(outside):
        bad = np.flatnonzero(outside.ravel())[0]
        raise OutsideDomainError(
            f"point ({px.ravel()[bad]!r}, {py.ravel()[bad]!r}) lies outside {grid.bounds}")
    sx = np.clip((px - grid.xmin) / grid.h, 0.0, grid.nx - 1)
    sy = np.clip((py - grid.ymin) / grid.h, 0.0, grid.ny - 1)
    # snap round-off neighbours of grid lines so node values come back exactly
    sx = np.where(np.abs(sx - np.rint(sx)) < SNAP, np.rint(sx), sx)
    sy = np.where(np.abs(sy - np.rint(sy)) < SNAP, np.rint(sy), sy)
    # a point on a grid line belongs to the cell below/left of it
    i = np.clip(np.ceil(sx).astype(np.intp) - 1, 0, grid.nx - 2)
    k = np.clip(np.ceil(sy).astype(np.intp) - 1, 0, grid.ny - 2)
    tx = np.clip(sx - i, 0.0, 1.0)
    ty = np.clip(sy - k, 0.0, 1.0)
    return i, k, tx, ty


def bilinear_weights(grid: Grid, points):
    """Corner indices and weights for bilinear interpolation at ``points``.

    Parameters
    ----------
    points : (n, 2) array_like

    Returns
    -------
    index : (n, 4) intp array
        Flat node indices of corners ``(k,l), (k+1,l), (k,l+1), (k+1,l+1)``.
    weight : (n, 4) float array
        The matching weights; each row lies in ``[0, 1]`` and sums to one.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    i, k, tx, ty = _cell_coords(grid, pts[:, 0], pts[:, 1])
    base = k * grid.nx + i
    index = np.stack([base, base + 1, base + grid.nx, base + grid.nx + 1], axis=1)
    weight = np.stack([(1 - tx) * (1 - ty), tx * (1 - ty), (1 - tx) * ty, tx * ty], axis=1)
    return index, weight


def apply_weights(field: np.ndarray, index: np.ndarray, weight: np.ndarray) -> np.ndarray:
    """Evaluate precomputed bilinear weights on ``field``, clipped to the corner range."""
    corners = np.asarray(field, dtype=float).ravel()[index]
    vals = np.einsum("...k,...k->...", corners, weight)
    return np.clip(vals, corners.min(axis=-1), corners.max(axis=-1))


def bilinear(field: np.ndarray, grid: Grid, at) -> float:
    """Bilinear interpolant of a nodal field at a single point of the closed domain."""
    field = np.asarray(field, dtype=float)
    if field.size != grid.size:
        raise ValueError(f"field has {field.size} values, grid has {grid.size} nodes")
    index, weight = bilinear_weights(grid, [at])
    return float(apply_weights(field, index, weight)[0])


def interpolate_to(field: np.ndarray, src: Grid, dst: Grid) -> np.ndarray:
    """Bilinear transfer of a nodal field from ``src`` onto the nodes of ``dst``."""
    X, Y = dst.coords
    index, weight = bilinear_weights(src, np.column_stack([X.ravel(), Y.ravel()]))
    return apply_weights(field, index, weight).reshape(dst.shape)


def write_field_csv(path, field: np.ndarray, grid: Grid) -> None:
    """Write ``x,y,u`` rows in row-major node order with 17 significant digits."""
    X, Y = grid.coords
    u = np.asarray(field, dtype=float).ravel()
    with open(path, "w", newline="") as fh:
        fh.write("x,y,u\n")
        for x, y, v in zip(X.ravel(), Y.ravel(), u):
            fh.write(f"{x:.17g},{y:.17g},{v:.17g}\n")


def read_field_csv(path):
    """Read a field written by :func:`write_field_csv`; returns ``(x, y, u)`` flat arrays."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data[:, 0], data[:, 1], data[:, 2]
