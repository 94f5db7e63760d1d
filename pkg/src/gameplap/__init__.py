"""Semi-Lagrangian p-average solver for the game p-Laplacian."""

from .analytic import SmoothFunction2D, game_infinity_laplacian, game_one_laplacian, game_p_laplacian
from .grid import Grid, bilinear, build_grid, read_field_csv, write_field_csv
from .paverage import INF, SampleSet, p_average, p_average_rows, parse_exponent
from .solver import (ConfigError, DivergenceError, ProblemSpec, RunReport, SolverConfig,
                     consistency_probe, multiresolution_solve, residual, solve, step)
from .stencil import CircleConfig, DirectionSet, StencilOperator, make_directions

__version__ = "0.1.0"

__all__ = [
    "SmoothFunction2D", "game_infinity_laplacian", "game_one_laplacian", "game_p_laplacian",
    "Grid", "bilinear", "build_grid", "read_field_csv", "write_field_csv",
    "INF", "SampleSet", "p_average", "p_average_rows", "parse_exponent",
    "ConfigError", "DivergenceError", "ProblemSpec", "RunReport", "SolverConfig",
    "consistency_probe", "multiresolution_solve", "residual", "solve", "step",
    "CircleConfig", "DirectionSet", "StencilOperator", "make_directions",
]
