"""Closed-form game Laplacians of smooth test functions.

These evaluate the game 1-, infinity- and p-Laplacian from an analytic
gradient and Hessian, and act as the reference the discrete p-average
operator is measured against.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .paverage import INF, conjugate

#: relative threshold below which the gradient counts as zero
CRITICAL_TOL = 1e-12


class CriticalPointError(ValueError):
    """The gradient vanishes, so the directional operator is undefined."""


@dataclass(frozen=True)
class SmoothFunction2D:
    """A scalar function on the plane with analytic first and second derivatives.

    ``value(x, y)``, ``gradient(x, y)`` and ``hessian(x, y)`` accept scalars or
    broadcastable arrays; ``gradient`` returns ``(gx, gy)`` and ``hessian``
    returns ``((hxx, hxy), (hxy, hyy))``.
    """

    value: Callable
    gradient: Callable
    hessian: Callable
    name: str = "phi"

    def __call__(self, x, y):
        return self.value(x, y)


def _frame(phi: SmoothFunction2D, at):
    x, y = float(at[0]), float(at[1])
    g = np.asarray(phi.gradient(x, y), dtype=float)
    H = np.asarray(phi.hessian(x, y), dtype=float)
    return x, y, g, H


def is_critical(phi: SmoothFunction2D, at) -> bool:
    x, y, g, _ = _frame(phi, at)
    return np.hypot(g[0], g[1]) < CRITICAL_TOL * (1.0 + abs(float(phi.value(x, y))))


def _directional(phi: SmoothFunction2D, at, orthogonal: bool) -> float:
    x, y, g, H = _frame(phi, at)
    norm = np.hypot(g[0], g[1])
    if norm < CRITICAL_TOL * (1.0 + abs(float(phi.value(x, y)))):
        raise CriticalPointError(f"gradient of {phi.name} vanishes at {tuple(at)}")
    n = g / norm
    if orthogonal:
        n = np.array([-n[1], n[0]])
    return float(n @ H @ n)


def game_infinity_laplacian(phi: SmoothFunction2D, at) -> float:
    """Second derivative of ``phi`` along its unit gradient."""
    return _directional(phi, at, orthogonal=False)


def game_one_laplacian(phi: SmoothFunction2D, at) -> float:
    """Second derivative of ``phi`` along the direction orthogonal to the gradient."""
    return _directional(phi, at, orthogonal=True)


def laplacian(phi: SmoothFunction2D, at) -> float:
    _, _, _, H = _frame(phi, at)
    return float(H[0, 0] + H[1, 1])


def game_p_laplacian(phi: SmoothFunction2D, at, p: float) -> float:
    """Game p-Laplacian ``(1/p) * Delta_1 + (1/q) * Delta_inf``.

    At critical points the value ``Delta_2 / 2`` is returned for every ``p``.
    """
    if p <= 1:
        raise ValueError(f"game_p_laplacian needs p > 1, got {p}")
    if is_critical(phi, at):
        return 0.5 * laplacian(phi, at)
    d_inf = game_infinity_laplacian(phi, at)
    if p == INF:
        return d_inf
    return game_one_laplacian(phi, at) / p + d_inf / conjugate(p)


# ---------------------------------------------------------------- test functions


def quadratic(a: float = 1.0, b: float = 1.0, c: float = 0.0) -> SmoothFunction2D:
    """``a*x**2 + 2*c*x*y + b*y**2``."""
    return SmoothFunction2D(
        value=lambda x, y: a * x**2 + 2 * c * x * y + b * y**2,
        gradient=lambda x, y: (2 * a * x + 2 * c * y, 2 * c * x + 2 * b * y),
        hessian=lambda x, y: ((2 * a + 0 * x, 2 * c + 0 * x), (2 * c + 0 * x, 2 * b + 0 * x)),
        name=f"{a}x^2+{2 * c}xy+{b}y^2",
    )


def linear(a: float = 1.0, b: float = 0.0, c: float = 0.0) -> SmoothFunction2D:
    """``a*x + b*y + c``."""
    zero = lambda x, y: 0.0 * np.asarray(x)  # noqa: E731
    return SmoothFunction2D(
        value=lambda x, y: a * x + b * y + c,
        gradient=lambda x, y: (a + zero(x, y), b + zero(x, y)),
        hessian=lambda x, y: ((zero(x, y), zero(x, y)), (zero(x, y), zero(x, y))),
        name=f"{a}x+{b}y+{c}",
    )


def harmonic_cubic() -> SmoothFunction2D:
    """``x**3 - 3*x*y**2``, the real part of ``z**3``."""
    return SmoothFunction2D(
        value=lambda x, y: x**3 - 3 * x * y**2,
        gradient=lambda x, y: (3 * x**2 - 3 * y**2, -6 * x * y),
        hessian=lambda x, y: ((6 * x, -6 * y), (-6 * y, -6 * x)),
        name="x^3-3xy^2",
    )


def aronsson() -> SmoothFunction2D:
    """``|x|**(4/3) - |y|**(4/3)``; second derivatives blow up on the axes."""
    def hess(x, y):
        with np.errstate(divide="ignore"):
            hxx = (4.0 / 9.0) * np.abs(x) ** (-2.0 / 3.0)
            hyy = -(4.0 / 9.0) * np.abs(y) ** (-2.0 / 3.0)
        return ((hxx, 0.0 * hxx), (0.0 * hxx, hyy))

    return SmoothFunction2D(
        value=lambda x, y: np.abs(x) ** (4.0 / 3.0) - np.abs(y) ** (4.0 / 3.0),
        gradient=lambda x, y: (
            (4.0 / 3.0) * np.sign(x) * np.abs(x) ** (1.0 / 3.0),
            -(4.0 / 3.0) * np.sign(y) * np.abs(y) ** (1.0 / 3.0),
        ),
        hessian=hess,
        name="|x|^(4/3)-|y|^(4/3)",
    )


def radial_paraboloid() -> SmoothFunction2D:
    """``(1 - x**2 - y**2) / 2``, which satisfies ``-Delta_p^G v = 1`` for ``p >= 2``."""
    return SmoothFunction2D(
        value=lambda x, y: 0.5 * (1.0 - x**2 - y**2),
        gradient=lambda x, y: (-np.asarray(x, dtype=float), -np.asarray(y, dtype=float)),
        hessian=lambda x, y: ((-1.0 + 0 * x, 0 * x), (0 * x, -1.0 + 0 * x)),
        name="(1-x^2-y^2)/2",
    )


def rotated(phi: SmoothFunction2D, angle: float) -> SmoothFunction2D:
    """``psi(z) = phi(R z)`` for the rotation ``R`` by ``angle``."""
    c, s = np.cos(angle), np.sin(angle)
    R = np.array([[c, -s], [s, c]])

    def fwd(x, y):
        return c * x - s * y, s * x + c * y

    def grad(x, y):
        g = np.asarray(phi.gradient(*fwd(x, y)), dtype=float)
        return tuple(R.T @ g)

    def hess(x, y):
        H = np.asarray(phi.hessian(*fwd(x, y)), dtype=float)
        return R.T @ H @ R

    return SmoothFunction2D(
        value=lambda x, y: phi.value(*fwd(x, y)),
        gradient=grad,
        hessian=hess,
        name=f"{phi.name} rotated by {angle:g}",
    )
