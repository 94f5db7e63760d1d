import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gameplap.analytic import (CriticalPointError, SmoothFunction2D, aronsson,
                               game_infinity_laplacian, game_one_laplacian, game_p_laplacian,
                               harmonic_cubic, is_critical, laplacian, linear, quadratic,
                               radial_paraboloid, rotated)
from gameplap.paverage import INF

coord = st.floats(-2, 2, allow_nan=False)


def test_directional_examples():
    phi = quadratic(1, 1)
    assert game_infinity_laplacian(phi, (1, 0)) == pytest.approx(2)
    assert game_one_laplacian(phi, (1, 0)) == pytest.approx(2)
    assert game_infinity_laplacian(linear(1, 0), (0.3, -0.7)) == 0
    assert game_one_laplacian(linear(1, 0), (0.3, -0.7)) == 0
    cubic = harmonic_cubic()
    assert game_infinity_laplacian(cubic, (1, 0)) == pytest.approx(6)
    assert game_one_laplacian(cubic, (1, 0)) == pytest.approx(-6)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 7.0, INF])
def test_radial_quadratic_any_p(p):
    phi = quadratic(1, 1)
    assert game_p_laplacian(phi, (1, 1), p) == pytest.approx(2, abs=1e-12)
    assert game_p_laplacian(phi, (0, 0), p) == 2  # critical branch


def test_aronsson_is_infinity_harmonic():
    assert abs(game_p_laplacian(aronsson(), (1, 1), INF)) < 1e-12
    assert abs(game_p_laplacian(aronsson(), (0.3, -0.8), INF)) < 1e-12


def test_paraboloid_solves_unit_source():
    v = radial_paraboloid()
    for p in (2.0, 5.0, INF):
        assert game_p_laplacian(v, (0.4, -0.2), p) == pytest.approx(-1)


def test_critical_point_handling():
    phi = quadratic(1, 2)
    assert is_critical(phi, (0, 0))
    assert not is_critical(phi, (1e-3, 0))
    with pytest.raises(CriticalPointError):
        game_infinity_laplacian(phi, (0, 0))
    with pytest.raises(CriticalPointError):
        game_one_laplacian(phi, (0, 0))


def test_convex_combination_formula():
    phi, at = quadratic(1, 2), (1, 1)
    d1, dinf = game_one_laplacian(phi, at), game_infinity_laplacian(phi, at)
    # gradient (2, 4): n = (1, 2)/sqrt5, H = diag(2, 4)
    assert dinf == pytest.approx((2 + 16) / 5)
    assert d1 == pytest.approx((8 + 4) / 5)
    assert game_p_laplacian(phi, at, 3) == pytest.approx(d1 / 3 + dinf * 2 / 3)


def test_callable_and_symmetric_hessian():
    phi = harmonic_cubic()
    assert phi(1.0, 0.5) == pytest.approx(1 - 0.75)
    H = np.asarray(phi.hessian(1.0, 0.5))
    np.testing.assert_array_equal(H, H.T)


@settings(max_examples=200, deadline=None)
@given(coord, coord, st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1))
def test_one_plus_infinity_is_laplacian(x, y, a, b, c):
    for phi in (quadratic(a, b, c), harmonic_cubic()):
        if is_critical(phi, (x, y)):
            continue
        total = game_one_laplacian(phi, (x, y)) + game_infinity_laplacian(phi, (x, y))
        assert total == pytest.approx(laplacian(phi, (x, y)), abs=1e-10)


@settings(max_examples=200, deadline=None)
@given(coord, coord, st.floats(0, 2 * np.pi), st.sampled_from([1.5, 2.0, 4.0, INF]))
def test_rotation_invariance(x, y, angle, p):
    phi = harmonic_cubic()
    psi = rotated(phi, angle)
    c, s = np.cos(angle), np.sin(angle)
    # psi(z) = phi(R z): psi at z equals phi at R z
    z = np.array([c * x + s * y, -s * x + c * y])
    assert psi(*z) == pytest.approx(phi(x, y), abs=1e-10)
    if is_critical(phi, (x, y)):
        return
    assert game_p_laplacian(psi, tuple(z), p) == pytest.approx(
        game_p_laplacian(phi, (x, y), p), abs=1e-10)


@settings(max_examples=200, deadline=None)
@given(coord, coord, st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1))
def test_p2_is_half_laplacian(x, y, a, b, c):
    phi = quadratic(a, b, c)
    assert game_p_laplacian(phi, (x, y), 2) == pytest.approx(0.5 * laplacian(phi, (x, y)),
                                                             abs=1e-12)


def test_custom_function():
    phi = SmoothFunction2D(lambda x, y: np.exp(x) * np.sin(y),
                           lambda x, y: (np.exp(x) * np.sin(y), np.exp(x) * np.cos(y)),
                           lambda x, y: ((np.exp(x) * np.sin(y), np.exp(x) * np.cos(y)),
                                         (np.exp(x) * np.cos(y), -np.exp(x) * np.sin(y))),
                           "e^x sin y")
    assert abs(laplacian(phi, (0.2, 0.9))) < 1e-12
