"""p-averages of finite sets of reals.

The p-average ``A_p(S)`` of ``S = {s_1, ..., s_m}`` is the minimiser over
``c`` of ``sum_j |s_j - c|**p``.  Closed forms are used for ``p = 1``
(median), ``p = 2`` (mean) and ``p = inf`` (midrange); every other exponent
is handled by bracketing the unique root of the monotone derivative of the
objective inside ``[min S, max S]``.

``p = inf`` is represented by :data:`INF` (``math.inf``), compared exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

INF = math.inf

#: bracket width relative to ``max(1, range(S))`` at which bisection stops
XTOL = 1e-12
MAX_STEPS = 200

Exponent = Union[int, float]


def parse_exponent(p) -> float:
    """Convert ``p`` (number or the string ``"inf"``) to a validated exponent."""
    if isinstance(p, str):
        token = p.strip().lower()
        if token in ("inf", "infinity", "oo"):
            return INF
        p = float(token)
    p = float(p)
    if math.isnan(p) or p < 1:
        raise ValueError(f"exponent p must satisfy 1 <= p <= inf, got {p!r}")
    return p


def conjugate(p: float) -> float:
    """Conjugate exponent ``q`` with ``1/p + 1/q = 1`` (``q = 1`` for ``p = inf``)."""
    if p == INF:
        return 1.0
    if p == 1:
        return INF
    return p / (p - 1.0)


@dataclass(frozen=True)
class SampleSet:
    """A finite multiset of reals together with the averaging exponent."""

    values: np.ndarray
    p: float

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float).ravel()
        if values.size == 0:
            raise ValueError("sample set must contain at least one value")
        if not np.all(np.isfinite(values)):
            raise ValueError("sample set values must be finite")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "p", parse_exponent(self.p))

    def __len__(self):
        return self.values.size

    def shifted(self, k: float) -> "SampleSet":
        return SampleSet(self.values + k, self.p)


def _require_open_exponent(p: float, name: str) -> None:
    if p == INF or p <= 1:
        raise ValueError(f"{name} is defined for 1 < p < inf only, got p={p}")


def q_objective(s: float, sample: SampleSet) -> float:
    """Return ``Q(s, S) = sum_j |s_j - s|**p``."""
    _require_open_exponent(sample.p, "q_objective")
    return float(np.sum(np.abs(sample.values - s) ** sample.p))


def q_derivative(s: float, sample: SampleSet) -> float:
    """Return ``dQ/ds = p * sum_{s_j != s} |s - s_j|**(p-2) * (s - s_j)``."""
    _require_open_exponent(sample.p, "q_derivative")
    d = s - sample.values
    d = d[d != 0]
    return float(sample.p * np.sum(np.abs(d) ** (sample.p - 2) * d))


def p_average(sample: SampleSet) -> float:
    """p-average of a single sample set.

    Examples
    --------
    >>> p_average(SampleSet([1, 2, 3, 4], 2))
    2.5
    >>> p_average(SampleSet([0, 1, 5], INF))
    2.5
    """
    return float(p_average_rows(sample.values[None, :], sample.p)[0])


def p_average_rows(values: np.ndarray, p: float, xtol: float = XTOL) -> np.ndarray:
    """Row-wise p-average of a 2-D array of samples.

    Parameters
    ----------
    values : (n, m) array_like
        ``n`` independent sample sets of ``m`` values each.
    p : float
        Exponent in ``[1, inf]``.
    xtol : float
        Stopping bracket width, relative to ``max(1, range)`` of each row.
        ``0`` bisects down to adjacent floating-point numbers.

    Returns
    -------
    (n,) ndarray
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 2 or values.shape[1] == 0:
        raise ValueError("values must be a non-empty 2-D array")
    p = parse_exponent(p)
    if p == INF:
        return 0.5 * (values.max(axis=1) + values.min(axis=1))
    if p == 2:
        # mean can drift outside [min, max] by an ulp; clip keeps the bound exact
        return np.clip(values.mean(axis=1), values.min(axis=1), values.max(axis=1))
    if p == 1:
        return np.median(values, axis=1)
    return _bisect_rows(values, p, xtol)


def _bisect_rows(values: np.ndarray, p: float, xtol: float) -> np.ndarray:
    lo_v = values.min(axis=1)
    hi_v = values.max(axis=1)
    spread = hi_v - lo_v
    out = lo_v.copy()
    active = spread > 0
    if not np.any(active):
        return out

    # Work on rows rescaled to [0, 1]; the argmin commutes with affine maps,
    # and the rescaling keeps |s_j - s|**p representable for large p.
    rows = np.flatnonzero(active)
    t = (values[rows] - lo_v[rows, None]) / spread[rows, None]
    tol = xtol * np.maximum(1.0, spread[rows]) / spread[rows]
    lo = np.zeros(rows.size)
    hi = np.ones(rows.size)
    pm1 = p - 1.0
    for _ in range(MAX_STEPS):
        open_ = (hi - lo) > tol
        if not np.any(open_):
            break
        idx = np.flatnonzero(open_)
        mid = 0.5 * (lo[idx] + hi[idx])
        # bracket already at adjacent floats
        stuck = (mid == lo[idx]) | (mid == hi[idx])
        if np.any(stuck):
            tol[idx[stuck]] = np.inf
            idx, mid = idx[~stuck], mid[~stuck]
            if idx.size == 0:
                break
        d = mid[:, None] - t[idx]
        a = np.abs(d)
        # normalise by the largest residual so the sign survives under/overflow
        scale = a.max(axis=1, keepdims=True)
        dq = np.sum(np.sign(d) * (a / scale) ** pm1, axis=1)
        right = dq > 0
        hi[idx[right]] = mid[right]
        lo[idx[~right]] = mid[~right]
        hit = dq == 0
        hi[idx[hit]] = mid[hit]
    s = 0.5 * (lo + hi)
    res = lo_v[rows] + spread[rows] * s
    out[rows] = np.clip(res, lo_v[rows], hi_v[rows])
    return out


def characterization_mean(sample: SampleSet, a: float) -> float:
    """Weighted mean ``sum w_j s_j / sum w_j`` with ``w_j = |s_j - a|**(p-2)``.

    At ``a = A_p(S)`` this reproduces ``a`` whenever no sample equals ``a``.
    Only meaningful as a check; iterating it is singular for ``p < 2``.
    """
    _require_open_exponent(sample.p, "characterization_mean")
    d = np.abs(sample.values - a)
    keep = d != 0
    w = d[keep] ** (sample.p - 2)
    return float(np.sum(w * sample.values[keep]) / np.sum(w))
