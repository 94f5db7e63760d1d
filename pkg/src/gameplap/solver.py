"""Fixed-point iterations for ``-Delta_p^G u = f`` in a rectangle, ``u = F`` on its boundary.

Two Jacobi-type maps are provided.  The parabolic one relaxes towards the
p-average of the stencil samples,

    u_j <- u_j + c_j * (A_p(samples_j) - u_j) + dt * f_j,   c_j = 2 dt / (alpha_j h)**2,

and the elliptic one jumps straight to it,

    u_j <- A_p(samples_j) + (alpha_j h)**2 / 2 * f_j.

Boundary nodes always carry ``F``.
"""

from __future__ import annotations

import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .grid import Grid, apply_weights, bilinear_weights, build_grid, interpolate_to
from .paverage import INF, p_average_rows, parse_exponent
from .stencil import CircleConfig, DirectionSet, StencilOperator, make_directions

log = logging.getLogger(__name__)

INIT_STRATEGIES = ("min-f", "max-f", "zero", "perturbed-exact", "multires")
SCHEMES = ("parabolic", "elliptic")
DEFAULT_SEED = 20110301
#: multiplier in the divergence guard
BLOWUP_FACTOR = 1e6


class ConfigError(ValueError):
    """Invalid problem or solver configuration."""


class DivergenceError(RuntimeError):
    def __init__(self, iteration: int, message: str):
        super().__init__(f"iteration {iteration}: {message}")
        self.iteration = iteration


def _as_field_function(value) -> Callable:
    if callable(value):
        return value
    c = float(value)
    return lambda x, y: np.full(np.broadcast(np.asarray(x), np.asarray(y)).shape, c)


@dataclass
class ProblemSpec:
    """Dirichlet problem on an axis-aligned rectangle.

    ``f``, ``F`` and ``exact`` are vectorised callables ``(x, y) -> array``;
    plain numbers are accepted for any of them and treated as constants.
    """

    bounds: tuple
    p: float
    f: Callable = 0.0
    F: Callable = 0.0
    exact: Optional[Callable] = None
    name: str = "custom"

    def __post_init__(self):
        self.bounds = tuple(float(b) for b in self.bounds)
        self.p = parse_exponent(self.p)
        if self.p == 1:
            raise ConfigError("p must be > 1 for the game p-Laplacian")
        self.f = _as_field_function(self.f)
        self.F = _as_field_function(self.F)
        if self.exact is not None:
            self.exact = _as_field_function(self.exact)


@dataclass
class SolverConfig:
    """Discretisation and iteration settings.

    ``dt`` applies to the parabolic scheme only; ``None`` picks the largest
    stable value ``(beta h)**2 / 2``.  ``probe`` switches the stopping rule to
    the change of the interpolated value at that point.
    """

    nx: int = 41
    ny: Optional[int] = None
    directions_total: int = 16
    circle: CircleConfig = field(default_factory=CircleConfig)
    scheme: str = "parabolic"
    dt: Optional[float] = None
    tol: float = 1e-5
    max_iter: int = 100_000
    init: str = "min-f"
    init_amplitude: float = 0.2
    seed: int = DEFAULT_SEED
    probe: Optional[tuple] = None
    probe_tol: float = 1e-6
    mr_levels: Optional[int] = None
    warm_iters: int = 25
    coarse_init: str = "zero"

    @property
    def shape(self):
        return (self.nx, self.nx if self.ny is None else self.ny)

    def echo(self) -> dict:
        d = asdict(self)
        d["ny"] = self.shape[1]
        d["probe"] = None if self.probe is None else list(self.probe)
        return d


@dataclass
class RunReport:
    iterations: int = 0
    final_residual: float = math.inf
    converged: bool = False
    linf_error: Optional[float] = None
    probe_value: Optional[float] = None
    residual_history: list = field(default_factory=list)
    wall_time: float = 0.0
    seed: Optional[int] = None
    level_iterations: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    problem: str = ""

    @property
    def total_iterations(self) -> int:
        return sum(self.level_iterations) if self.level_iterations else self.iterations

    def to_dict(self, timing: bool = True) -> dict:
        d = asdict(self)
        if not timing:
            d["wall_time"] = None
        return _jsonable(d)

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return "inf" if obj > 0 else ("-inf" if obj < 0 else "nan")
    if isinstance(obj, np.generic):
        return _jsonable(obj.item())
    return obj


# --------------------------------------------------------------------- set-up


def make_grid(problem: ProblemSpec, config: SolverConfig) -> Grid:
    nx, ny = config.shape
    try:
        return build_grid(problem.bounds, nx, ny)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def max_stable_dt(grid: Grid, circle: CircleConfig) -> float:
    return 0.5 * (circle.beta * grid.h) ** 2


def validate(problem: ProblemSpec, config: SolverConfig, grid: Optional[Grid] = None) -> Grid:
    """Check ``config`` against ``problem``; returns the grid it implies."""
    if config.scheme not in SCHEMES:
        raise ConfigError(f"scheme must be one of {SCHEMES}, got {config.scheme!r}")
    if config.init not in INIT_STRATEGIES:
        raise ConfigError(f"init must be one of {INIT_STRATEGIES}, got {config.init!r}")
    if config.coarse_init not in ("zero", "min-f", "max-f"):
        raise ConfigError(f"coarse_init must be zero, min-f or max-f, got {config.coarse_init!r}")
    try:
        make_directions(config.directions_total)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if not config.tol > 0 or not config.probe_tol > 0:
        raise ConfigError("tolerances must be positive")
    if config.max_iter < 1:
        raise ConfigError("max_iter must be >= 1")
    if config.init == "perturbed-exact" and problem.exact is None:
        raise ConfigError("perturbed-exact initialisation needs an exact solution")
    grid = grid or make_grid(problem, config)
    if config.dt is not None:
        if config.scheme == "elliptic":
            raise ConfigError("dt only applies to the parabolic scheme")
        if not config.dt > 0:
            raise ConfigError(f"dt must be positive, got {config.dt}")
        ratio = 2 * config.dt / (config.circle.beta * grid.h) ** 2
        if ratio > 1 + 1e-12:
            raise ConfigError(
                f"dt={config.dt:g} violates 2 dt / (beta h)^2 <= 1 (ratio {ratio:.4g})")
    if config.probe is not None and not grid.contains(config.probe):
        raise ConfigError(f"probe {config.probe} lies outside the domain")
    return grid


def initial_field(problem: ProblemSpec, grid: Grid, init: str = "min-f",
                  amplitude: float = 0.2, seed: int = DEFAULT_SEED) -> np.ndarray:
    """Starting iterate: boundary nodes carry ``F``, interior per ``init``.

    ``perturbed-exact`` multiplies the exact solution by ``1 + xi`` with
    ``xi`` uniform in ``[-amplitude, amplitude]``, drawn from
    ``numpy.random.default_rng(seed)``.
    """
    bnd = grid.boundary_mask
    Fb = grid.sample(problem.F)[bnd]
    u = np.empty(grid.shape)
    if init == "min-f":
        u[:] = Fb.min()
    elif init == "max-f":
        u[:] = Fb.max()
    elif init in ("zero", "multires"):
        u[:] = 0.0
    elif init == "perturbed-exact":
        if problem.exact is None:
            raise ConfigError("perturbed-exact initialisation needs an exact solution")
        rng = np.random.default_rng(seed)
        xi = rng.uniform(-amplitude, amplitude, size=grid.shape)
        u[:] = grid.sample(problem.exact) * (1.0 + xi)
    else:
        raise ConfigError(f"unknown init strategy {init!r}")
    u[bnd] = Fb
    return u


class GameScheme:
    """One grid's iteration map, with the stencil interpolation precomputed."""

    def __init__(self, problem: ProblemSpec, grid: Grid, config: SolverConfig,
                 dirs: Optional[DirectionSet] = None):
        self.problem = problem
        self.grid = grid
        self.config = config
        self.dirs = dirs or make_directions(config.directions_total)
        self.op = StencilOperator(grid, self.dirs, config.circle)
        self.boundary = np.flatnonzero(grid.boundary_mask.ravel())
        self.boundary_values = grid.sample(problem.F).ravel()[self.boundary]
        f_int = grid.sample(problem.f).ravel()[self.op.nodes]
        if not np.all(np.isfinite(f_int)) or not np.all(np.isfinite(self.boundary_values)):
            raise ConfigError("f and F must be finite on the grid")
        r2 = (grid.h * self.op.alpha) ** 2
        if config.scheme == "elliptic":
            self.relax = None
            self.source = 0.5 * r2 * f_int
        else:
            dt = max_stable_dt(grid, config.circle) if config.dt is None else config.dt
            self.dt = dt
            self.relax = 2.0 * dt / r2
            self.source = dt * f_int
        fmax = float(np.max(np.abs(f_int))) if f_int.size else 0.0
        fbmax = float(np.max(np.abs(self.boundary_values)))
        self.blowup = (1 + fmax * grid.diameter**2) * (1 + fbmax) * BLOWUP_FACTOR

    def averages(self, u: np.ndarray) -> np.ndarray:
        return p_average_rows(self.op(u), self.problem.p)

    def __call__(self, u: np.ndarray) -> np.ndarray:
        flat = np.asarray(u, dtype=float).ravel()
        avg = self.averages(flat)
        new = flat.copy()
        if self.relax is None:
            new[self.op.nodes] = avg + self.source
        else:
            old = flat[self.op.nodes]
            new[self.op.nodes] = old + self.relax * (avg - old) + self.source
        new[self.boundary] = self.boundary_values
        return new.reshape(self.grid.shape)


def step(field: np.ndarray, problem: ProblemSpec, grid: Grid,
         dirs: DirectionSet, config: SolverConfig) -> np.ndarray:
    """Apply one iteration of the configured scheme to ``field``."""
    return GameScheme(problem, grid, config, dirs)(field)


def residual(old: np.ndarray, new: np.ndarray) -> float:
    """``max_j |new_j - old_j|``."""
    old = np.asarray(old, dtype=float)
    new = np.asarray(new, dtype=float)
    if old.shape != new.shape:
        raise ValueError(f"shape mismatch {old.shape} vs {new.shape}")
    return float(np.max(np.abs(new - old)))


# -------------------------------------------------------------------- drivers


def _iterate(scheme: GameScheme, u: np.ndarray, config: SolverConfig, max_iter: int,
             report: RunReport, use_stop_rule: bool = True):
    grid = scheme.grid
    probe_w = None
    if config.probe is not None:
        probe_w = bilinear_weights(grid, [config.probe])
        probe_old = float(apply_weights(u, *probe_w)[0])
    n = 0
    E = math.inf
    done = False
    while n < max_iter:
        new = scheme(u)
        n += 1
        if not np.all(np.isfinite(new)) or np.max(np.abs(new)) > scheme.blowup:
            raise DivergenceError(n, "iterate became non-finite or exceeded the divergence bound")
        E = residual(u, new)
        report.residual_history.append(E)
        u = new
        if probe_w is not None:
            probe_new = float(apply_weights(u, *probe_w)[0])
            report.probe_value = probe_new
            done = abs(probe_new - probe_old) <= config.probe_tol
            probe_old = probe_new
        else:
            done = E <= config.tol
        if use_stop_rule and done:
            break
    return u, n, E, done


def solve(problem: ProblemSpec, config: SolverConfig):
    """Iterate the scheme until the stopping rule holds or ``max_iter`` is reached.

    Returns
    -------
    field : (ny, nx) ndarray
    report : RunReport
    """
    if config.init == "multires":
        return multiresolution_solve(problem, config)
    grid = validate(problem, config)
    t0 = time.perf_counter()
    report = RunReport(config=config.echo(), problem=problem.name)
    if config.init == "perturbed-exact":
        report.seed = config.seed
    u = initial_field(problem, grid, config.init, config.init_amplitude, config.seed)
    scheme = GameScheme(problem, grid, config)
    u, n, E, done = _iterate(scheme, u, config, config.max_iter, report)
    _finish(report, problem, grid, u, n, E, done, t0)
    return u, report


def _finish(report, problem, grid, u, n, E, done, t0):
    report.iterations = n
    report.final_residual = E
    report.converged = bool(done)
    if not done:
        log.warning("%s: stopped after max_iter=%d (E=%.3g)", problem.name, n, E)
    if problem.exact is not None:
        report.linf_error = float(np.max(np.abs(u - grid.sample(problem.exact))))
    report.wall_time = time.perf_counter() - t0


def multires_grids(problem: ProblemSpec, config: SolverConfig):
    """Coarse-to-fine grid sequence ending at the configured grid.

    Each coarser grid doubles the spacing.  By default the coarsest grid keeps
    at least 20 cells along its shorter side.
    """
    fine = make_grid(problem, config)
    short = min(fine.nx, fine.ny) - 1
    levels = config.mr_levels
    if levels is None:
        levels = 1 + max(0, int(math.floor(math.log2(short / 20)))) if short >= 20 else 1
    grids = [fine]
    for k in range(1, levels):
        cx = (fine.nx - 1) / 2**k
        cy = (fine.ny - 1) / 2**k
        if cx != int(cx) or cy != int(cy) or min(cx, cy) < 2:
            raise ConfigError(
                f"grid {fine.nx}x{fine.ny} cannot be coarsened {levels - 1} times by halving")
        grids.append(build_grid(problem.bounds, int(cx) + 1, int(cy) + 1))
    return grids[::-1]


def multiresolution_solve(problem: ProblemSpec, config: SolverConfig):
    """Warm-start on successively finer grids, then solve on the finest one.

    The coarsest grid starts from ``config.coarse_init``; every coarse level runs
    ``config.warm_iters`` iterations before its field is bilinearly transferred
    to the next grid and the boundary reset to ``F``.
    """
    validate(problem, replace(config, init="zero"))
    t0 = time.perf_counter()
    grids = multires_grids(problem, config)
    report = RunReport(config=config.echo(), problem=problem.name)
    dirs = make_directions(config.directions_total)
    u = initial_field(problem, grids[0], config.coarse_init)
    for level, grid in enumerate(grids):
        if level > 0:
            u = interpolate_to(u, grids[level - 1], grid)
            u[grid.boundary_mask] = grid.sample(problem.F)[grid.boundary_mask]
        scheme = GameScheme(problem, grid, config, dirs)
        finest = level == len(grids) - 1
        budget = config.max_iter if finest else config.warm_iters
        sub = RunReport()
        u, n, E, done = _iterate(scheme, u, config, budget, sub, use_stop_rule=finest)
        report.level_iterations.append(n)
        if finest:
            report.residual_history = sub.residual_history
            report.probe_value = sub.probe_value
    _finish(report, problem, grids[-1], u, n, E, done, t0)
    return u, report


# ---------------------------------------------------------------- consistency


def consistency_probe(phi, at, p: float, h: float, dirs: DirectionSet, alpha: float = 1.0) -> float:
    """Discrete operator ``2 / (alpha h)**2 * (A_p(phi on circle) - phi(at))``.

    Samples are exact values of ``phi`` on the circle of radius ``alpha * h``
    around ``at``; no grid is involved.
    """
    p = parse_exponent(p)
    r = alpha * h
    x0, y0 = float(at[0]), float(at[1])
    pts = np.array([x0, y0]) + r * dirs.directions
    centre = float(phi(x0, y0))
    # shift before scaling: the average commutes with both
    vals = (np.asarray(phi(pts[:, 0], pts[:, 1]), dtype=float) - centre) * (2.0 / r**2)
    # full-precision bisection: the 1/r**2 scaling magnifies any inner error
    return float(p_average_rows(vals[None, :], p, xtol=0.0)[0])


__all__ = [
    "ConfigError", "DivergenceError", "ProblemSpec", "SolverConfig", "RunReport",
    "GameScheme", "initial_field", "step", "residual", "solve", "multiresolution_solve",
    "multires_grids", "consistency_probe", "validate", "max_stable_dt", "INF",
]
