"""Benchmark problems with reference result rows, and a table runner.

Reference values (errors, iteration counts, CPU seconds) are transcribed
unchanged; iteration counts and timings are informational only.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .grid import bilinear, build_grid
from .paverage import INF
from .solver import ProblemSpec, SolverConfig, solve
from .stencil import CircleConfig

log = logging.getLogger(__name__)

SQUARE = (-1.0, 1.0, -1.0, 1.0)
RECTANGLE = (-2.0, 2.0, -1.0, 1.0)


@dataclass(frozen=True)
class ReferenceRow:
    """One reference cell: the setting it was run with and what was reported."""

    settings: dict
    error: float
    iterations: Optional[int] = None
    cpu_time: Optional[float] = None

    def to_dict(self) -> dict:
        return {"settings": dict(self.settings), "error": self.error,
                "iterations": self.iterations, "cpu_time": self.cpu_time}

    @classmethod
    def from_dict(cls, d: dict) -> "ReferenceRow":
        return cls(dict(d["settings"]), d["error"], d.get("iterations"), d.get("cpu_time"))


@dataclass
class NamedProblem:
    id: str
    problem: ProblemSpec
    reference_rows: list = field(default_factory=list)
    probe: Optional[tuple] = None
    probe_target: Optional[float] = None
    partial_exact: Optional[Callable] = None

    def reference(self, **settings) -> ReferenceRow:
        """The single reference row whose settings include ``settings``."""
        hits = [r for r in self.reference_rows
                if all(r.settings.get(k) == v for k, v in settings.items())]
        if len(hits) != 1:
            raise KeyError(f"{self.id}: {len(hits)} reference rows match {settings}")
        return hits[0]


# ------------------------------------------------------------------ problems


def _aronsson(x, y):
    return np.abs(x) ** (4.0 / 3.0) - np.abs(y) ** (4.0 / 3.0)


def _paraboloid(x, y):
    return 0.5 * (1.0 - x**2 - y**2)


_ARONSSON = {
    # directions: [(error, iterations) for N = 41, 81, 161, 241, 401]
    4: [(0.1105, 250), (0.0765, 448), (0.0373, 584), (0.0225, 589), (0.0122, 621)],
    8: [(0.0274, 80), (0.0182, 161), (0.0084, 214), (0.0069, 190), (0.0048, 188)],
    16: [(0.0084, 54), (0.0070, 75), (0.0043, 105), (0.0033, 108), (0.0023, 112)],
    24: [(0.0088, 57), (0.0081, 73), (0.0050, 91), (0.0035, 103), (0.0024, 107)],
}
ARONSSON_NODES = (41, 81, 161, 241, 401)

# p -> {(nodes, levels): {directions: (error, iterations)}}
_RADIAL = {
    5.0: {
        (21, 2): {16: (0.0634, 163), 24: (0.0617, 180)},
        (21, 4): {16: (0.0241, 50), 24: (0.0192, 107)},
        (41, 4): {16: (0.0201, 213), 24: (0.0191, 163)},
    },
    INF: {
        (21, 2): {16: (0.0590, 249), 24: (0.0563, 248)},
        (21, 4): {16: (0.0211, 80), 24: (0.0185, 77)},
        (41, 4): {16: (0.0192, 272), 24: (0.0156, 272)},
    },
}

# (nx, ny, levels, error at (0,0), iterations, cpu seconds)
_TUGOFWAR = [(161, 81, 4, 0.0276, 1112, 236), (241, 121, 4, 0.0155, 2205, 957),
           (321, 161, 4, 0.0094, 3578, 2681)]
_TUGOFWAR_LEVELS = [(161, 81, 4, 0.0276, 1112, 236), (161, 81, 2, 0.0260, 3330, 621),
           (161, 81, 1, 0.0917, 9206, 1881)]


def aronsson_problem() -> NamedProblem:
    """Infinity-harmonic Aronsson function on the square, with the first error table."""
    problem = ProblemSpec(SQUARE, INF, 0.0, _aronsson, _aronsson, "aronsson")
    rows = [
        ReferenceRow({"table": 1, "directions": dirs, "nodes": n, "levels": 2, "beta": 0.99},
                     err, it)
        for dirs, cells in _ARONSSON.items()
        for n, (err, it) in zip(ARONSSON_NODES, cells)
    ]
    return NamedProblem("aronsson", problem, rows)


def radial_problem(p) -> NamedProblem:
    """``(1 - x^2 - y^2) / 2`` with ``f = 1``; valid for ``p >= 2``."""
    problem = ProblemSpec(SQUARE, p, 1.0, _paraboloid, _paraboloid, "radial")
    if problem.p < 2:
        raise ValueError(f"the radial benchmark needs p >= 2, got {p}")
    rows = []
    table = {5.0: 2, INF: 3}.get(problem.p)
    if table is not None:
        for (n, levels), cells in _RADIAL[problem.p].items():
            for dirs, (err, it) in cells.items():
                rows.append(ReferenceRow(
                    {"table": table, "nodes": n, "levels": levels, "directions": dirs,
                     "beta": 0.9}, err, it))
    return NamedProblem(f"radial-p{problem.p:g}", problem, rows)


def tugofwar_problem() -> NamedProblem:
    """``f = 1``, ``F = 0`` on ``(-2,2) x (-1,1)`` for ``p = inf``.

    The solution is ``(1 - y^2) / 2`` only on the strip ``|x| < 1``; the error is
    read at the probe ``(0, 0)`` against 0.5.
    """
    problem = ProblemSpec(RECTANGLE, INF, 1.0, 0.0, None, "tugofwar")

    def partial_exact(x, y):
        x = np.asarray(x, dtype=float)
        return np.where(np.abs(x) < 1, 0.5 * (1.0 - np.asarray(y, dtype=float) ** 2), np.nan)

    rows = [ReferenceRow({"table": 4, "nx": nx, "ny": ny, "levels": lev, "directions": 16,
                          "beta": 0.8}, err, it, cpu)
            for nx, ny, lev, err, it, cpu in _TUGOFWAR]
    rows += [ReferenceRow({"table": 5, "nx": nx, "ny": ny, "levels": lev, "directions": 16,
                           "beta": 0.8}, err, it, cpu)
             for nx, ny, lev, err, it, cpu in _TUGOFWAR_LEVELS]
    return NamedProblem("tugofwar", problem, rows, probe=(0.0, 0.0), probe_target=0.5,
                        partial_exact=partial_exact)


def characteristic_datum(point=(1.0, 0.0)):
    """Boundary datum equal to 1 at the boundary node nearest ``point`` on any grid.

    The returned callable recognises the node from the coordinate arrays it is
    evaluated on, so it only makes sense on full nodal grids.
    """
    px, py = point

    def F(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        x, y = np.broadcast_arrays(x, y)
        out = np.zeros(x.shape)
        if x.ndim != 2 or x.shape[0] < 3 or x.shape[1] < 3:
            return out
        edge = np.zeros(x.shape, dtype=bool)
        edge[0, :] = edge[-1, :] = edge[:, 0] = edge[:, -1] = True
        d = np.where(edge, np.hypot(x - px, y - py), np.inf)
        out.flat[int(np.argmin(d))] = 1.0
        return out

    return F


def smooth_boundary_problems() -> list:
    """The three infinity-harmonic problems without a known solution."""
    def xy(x, y):
        return np.abs(x) ** 2 * np.abs(y) ** 2

    def cubic(x, y):
        return x**3 - 3 * x * y**2

    return [
        NamedProblem("bdry-xy", ProblemSpec(SQUARE, INF, 0.0, xy, None, "bdry-xy")),
        NamedProblem("bdry-cubic", ProblemSpec(SQUARE, INF, 0.0, cubic, None, "bdry-cubic")),
        NamedProblem("bdry-char",
                     ProblemSpec(SQUARE, INF, 0.0, characteristic_datum(), None, "bdry-char")),
    ]


def named_problem(name: str, p=INF) -> NamedProblem:
    if name == "aronsson":
        return aronsson_problem()
    if name == "radial":
        return radial_problem(p)
    if name == "tugofwar":
        return tugofwar_problem()
    for np_ in smooth_boundary_problems():
        if np_.id == name:
            return np_
    raise KeyError(f"unknown benchmark problem {name!r}")


# ------------------------------------------------------------- table configs


def aronsson_config(nodes: int, directions: int = 16, **kw) -> SolverConfig:
    h = 2.0 / (nodes - 1)
    base = dict(nx=nodes, directions_total=directions, circle=CircleConfig(2, 0.99),
                scheme="parabolic", tol=2 * h * 1e-2, init="perturbed-exact")
    base.update(kw)
    return SolverConfig(**base)


def radial_config(nodes: int, levels: int, directions: int, **kw) -> SolverConfig:
    base = dict(nx=nodes, directions_total=directions, circle=CircleConfig(levels, 0.9),
                scheme="elliptic", tol=1e-5, init="min-f")
    base.update(kw)
    return SolverConfig(**base)


def tugofwar_config(nx: int, ny: int, levels: int = 4, **kw) -> SolverConfig:
    base = dict(nx=nx, ny=ny, directions_total=16, circle=CircleConfig(levels, 0.8),
                scheme="elliptic", init="min-f", probe=(0.0, 0.0), probe_tol=1e-6,
                max_iter=50_000)
    base.update(kw)
    return SolverConfig(**base)


def benchmark_table(number: int):
    """``(named_problem, [(label, config), ...])`` for benchmark table ``number`` (1-5)."""
    if number == 1:
        named = aronsson_problem()
        rows = [(f"dirs={d} N={n}", aronsson_config(n, d))
                for d in _ARONSSON for n in ARONSSON_NODES]
    elif number in (2, 3):
        p = 5.0 if number == 2 else INF
        named = radial_problem(p)
        rows = [(f"N={n} ({lev}) dirs={d}", radial_config(n, lev, d))
                for (n, lev), cells in _RADIAL[p].items() for d in cells]
    elif number == 4:
        named = tugofwar_problem()
        rows = [(f"{nx}x{ny}", tugofwar_config(nx, ny, lev)) for nx, ny, lev, *_ in _TUGOFWAR]
    elif number == 5:
        named = tugofwar_problem()
        rows = [(f"levels={lev}", tugofwar_config(nx, ny, lev)) for nx, ny, lev, *_ in _TUGOFWAR_LEVELS]
    else:
        raise ValueError(f"no table {number}")
    return named, rows


# ------------------------------------------------------------------ runner


@dataclass
class TableRow:
    label: str
    error: Optional[float]
    iterations: Optional[int]
    wall_time: float
    converged: bool = False
    failure: Optional[str] = None
    field: Optional[np.ndarray] = None
    report: object = None


@dataclass
class Table:
    problem: str
    rows: list

    COLUMNS = ("label", "error", "iterations", "converged", "wall_time", "failure")

    def _cells(self, row: TableRow, timing: bool):
        err = "" if row.error is None else f"{row.error:.6g}"
        it = "" if row.iterations is None else str(row.iterations)
        wt = f"{row.wall_time:.3f}" if timing else ""
        return [row.label, err, it, str(row.converged).lower(), wt, row.failure or ""]

    def to_csv(self, timing: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.COLUMNS)
        for row in self.rows:
            w.writerow(self._cells(row, timing))
        return buf.getvalue()

    def to_text(self, timing: bool = True) -> str:
        body = [list(self.COLUMNS)] + [self._cells(r, timing) for r in self.rows]
        widths = [max(len(r[c]) for r in body) for c in range(len(self.COLUMNS))]
        lines = [f"# {self.problem}"]
        for r in body:
            lines.append("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
        return "\n".join(lines) + "\n"


def measure_error(named: NamedProblem, field_: np.ndarray, config: SolverConfig, report) -> float:
    """Probe error when a probe target exists, otherwise the nodal max error."""
    if named.probe_target is not None:
        grid = build_grid(named.problem.bounds, *config.shape)
        return abs(bilinear(field_, grid, named.probe) - named.probe_target)
    return report.linf_error


def run_table(named: NamedProblem, configs, keep_fields: bool = False) -> Table:
    """Solve ``named`` once per config; failures are recorded and the run continues.

    ``configs`` holds ``SolverConfig`` objects or ``(label, SolverConfig)`` pairs.
    """
    configs = list(configs)
    if not configs:
        raise ValueError("run_table needs at least one configuration")
    rows = []
    for item in configs:
        label, cfg = item if isinstance(item, tuple) else (_default_label(item), item)
        t0 = time.perf_counter()
        try:
            u, rep = solve(named.problem, cfg)
        except Exception as exc:  # one bad row must not sink the table
            log.error("%s [%s] failed: %s", named.id, label, exc)
            rows.append(TableRow(label, None, None, time.perf_counter() - t0,
                                 failure=f"{type(exc).__name__}: {exc}"))
            continue
        err = measure_error(named, u, cfg, rep)
        rows.append(TableRow(label, err, rep.iterations, rep.wall_time, rep.converged,
                             field=u if keep_fields else None, report=rep))
        log.info("%s [%s] error=%.4g iterations=%d", named.id, label,
                 err if err is not None else math.nan, rep.iterations)
    return Table(named.id, rows)


def _default_label(cfg: SolverConfig) -> str:
    nx, ny = cfg.shape
    return (f"{nx}x{ny} dirs={cfg.directions_total} levels={cfg.circle.levels} "
            f"beta={cfg.circle.beta:g}")


__all__ = [
    "ReferenceRow", "NamedProblem", "aronsson_problem", "radial_problem", "tugofwar_problem",
    "smooth_boundary_problems", "characteristic_datum", "named_problem", "benchmark_table",
    "aronsson_config", "radial_config", "tugofwar_config", "run_table", "Table", "TableRow",
]
