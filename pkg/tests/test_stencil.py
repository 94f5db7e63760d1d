import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gameplap.grid import build_grid
from gameplap.paverage import p_average_rows
from gameplap.stencil import (CircleConfig, StencilOperator, alpha_at, alpha_field,
                              make_directions, stencil_points, stencil_samples)

SQUARE = (-1.0, 1.0, -1.0, 1.0)


def test_four_directions():
    d = make_directions(4).directions
    np.testing.assert_array_equal(d, [[1, 0], [0, 1], [-1, 0], [0, -1]])


def test_sixteen_directions():
    ds = make_directions(16)
    assert ds.dtheta == pytest.approx(math.pi / 8)
    assert len(ds) == 16
    assert ds.directions[1] == pytest.approx([math.cos(math.pi / 8), math.sin(math.pi / 8)],
                                             abs=1e-16)


@pytest.mark.parametrize("total", [0, 2, 6, 10, -4, 4.5])
def test_bad_direction_counts(total):
    with pytest.raises(ValueError, match="multiple of 4"):
        make_directions(total)


@pytest.mark.parametrize("total", [4, 8, 12, 16, 24, 64, 256])
def test_direction_symmetries(total):
    d = make_directions(total).directions
    assert np.max(np.abs(np.hypot(d[:, 0], d[:, 1]) - 1)) <= 1e-15
    rows = {tuple(r) for r in d}
    for x, y in d:
        assert (-x, -y) in rows
        assert (-y, x) in rows
        assert (x, -y) in rows
        assert (-x, y) in rows


def test_alpha_examples():
    g = build_grid(SQUARE, 21)
    assert alpha_at((1, 5), CircleConfig(4, 0.99), g) == pytest.approx(0.99)
    assert alpha_at((7, 10), CircleConfig(4, 0.8), g) == pytest.approx(3.2)
    assert alpha_at((2, 2), CircleConfig(2, 1.0), g) == 2
    with pytest.raises(ValueError):
        alpha_at((0, 3), CircleConfig(), g)


def test_circle_config_validation():
    for bad in [dict(levels=0), dict(levels=1.5), dict(beta=0), dict(beta=1.2)]:
        with pytest.raises(ValueError):
            CircleConfig(**bad)


@pytest.mark.parametrize("levels,beta", [(1, 1.0), (2, 0.99), (4, 0.8), (6, 1.0)])
def test_stencils_stay_inside(levels, beta):
    g = build_grid((-2, 2, -1, 1), 41, 21)
    circle = CircleConfig(levels, beta)
    a = alpha_field(g, circle)
    assert np.all(g.h * a <= beta * g.distance_to_boundary + 1e-15)
    op = StencilOperator(g, make_directions(16), circle)  # raises if any point is outside
    assert op.shape == (int(g.interior_mask.sum()), 16)


def test_constant_and_linear_fields():
    g = build_grid(SQUARE, 21)
    dirs, circle = make_directions(16), CircleConfig(2, 0.99)
    node = (10, 10)  # the origin
    np.testing.assert_array_equal(stencil_samples(g, np.full(g.shape, 3.5), node, dirs, circle),
                                  3.5)
    s = stencil_samples(g, g.sample(lambda x, y: x), node, dirs, circle)
    r = g.h * alpha_at(node, circle, g)
    np.testing.assert_allclose(s, r * dirs.directions[:, 0], atol=1e-15)
    for p in (1.0, 2.0, math.inf):
        assert abs(p_average_rows(s[None, :], p)[0]) < 1e-14
    assert abs(p_average_rows(s[None, :], 3.0)[0]) <= 1e-12  # bisection width


def test_quadratic_samples_converge_at_second_order():
    dirs, circle = make_directions(16), CircleConfig(2, 0.9)

    def deviation(n):
        g = build_grid(SQUARE, n)
        node = (n // 2, n // 2)
        r = g.h * alpha_at(node, circle, g)
        s = stencil_samples(g, g.sample(lambda x, y: x**2 + y**2), node, dirs, circle)
        return np.max(np.abs(s - r**2)), g.h

    d0, h0 = deviation(21)
    C = d0 / h0**2
    d1, h1 = deviation(41)
    assert d1 <= C * h1**2 * (1 + 1e-6)


def test_operator_matches_per_node_assembly():
    g = build_grid((-2, 2, -1, 1), 21, 11)
    dirs, circle = make_directions(8), CircleConfig(3, 0.9)
    u = np.random.default_rng(0).normal(size=g.shape)
    op = StencilOperator(g, dirs, circle)
    rows = op(u)
    for r, j in enumerate(op.nodes[::7]):
        k, i = divmod(int(j), g.nx)
        np.testing.assert_allclose(rows[7 * r], stencil_samples(g, u, (i, k), dirs, circle),
                                   atol=1e-14)
    pts = stencil_points(g, (3, 4), dirs, circle)
    assert pts.shape == (8, 2)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_assembly_is_monotone(seed):
    rng = np.random.default_rng(seed)
    g = build_grid(SQUARE, 11)
    op = StencilOperator(g, make_directions(12), CircleConfig(3, 0.9))
    v = rng.normal(size=g.shape)
    u = v + np.abs(rng.normal(size=g.shape)) * (rng.random(g.shape) < 0.5)
    assert np.all(op(u) >= op(v))
