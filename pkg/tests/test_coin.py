from __future__ import annotations

import json
import math

import numpy as np
import pytest
from hypothesis import given

from qwalk.coin import (
    P123,
    P132,
    CoinMatrix,
    Family,
    classify,
    coin_from_theta,
    coin_from_xy,
    ellipse_residual,
    grover,
    inverse_coin,
    permutation_sum_coefficients,
)
from qwalk.errors import ConstraintViolation, RangeError

from conftest import families, thetas


def test_grover_entries():
    g = grover()
    expected = np.array([[-1, 2, 2], [2, -1, 2], [2, 2, -1]]) / 3.0
    assert np.allclose(g.entries, expected, atol=1e-15)
    assert g.is_grover and g.family is Family.X


def test_negative_grover_is_y_at_zero():
    c = coin_from_theta("Y", 0.0)
    assert np.allclose(c.entries, -grover().entries, atol=1e-15)
    assert c.is_grover


@pytest.mark.parametrize(
    "family, theta, tag, matrix",
    [
        ("X", 0.0, "I", np.eye(3)),
        ("X", 2 * math.pi / 3, "P123", P123),
        ("X", -2 * math.pi / 3, "P132", P132),
        ("Y", math.pi, "-I", -np.eye(3)),
        ("Y", -math.pi, "-I", -np.eye(3)),
        ("Y", math.pi / 3, "-P132", -P132),
        ("Y", -math.pi / 3, "-P123", -P123),
    ],
)
def test_permutation_points_are_exact(family, theta, tag, matrix):
    c = coin_from_theta(family, theta)
    assert c.permutation == tag
    assert np.array_equal(c.entries, matrix)


def test_entries_read_only():
    with pytest.raises(ValueError):
        grover().entries[0, 0] = 1.0


@given(families, thetas)
def test_orthogonal_circulant_with_family_determinant(family, theta):
    c = coin_from_theta(family, theta)
    m = np.asarray(c)
    assert np.abs(m.T @ m - np.eye(3)).max() <= 1e-12
    assert abs(np.linalg.det(m) - family.det) <= 1e-12
    assert abs(ellipse_residual(family, c.x, c.y)) <= 1e-12
    assert abs(m[0].sum() - family.det) <= 1e-12
    lo, hi = family.x_range
    assert lo - 1e-12 <= c.x <= hi + 1e-12


@given(families, thetas)
def test_permutation_sum_decomposition(family, theta):
    c = coin_from_theta(family, theta)
    a, b, d = permutation_sum_coefficients(c)
    assert np.allclose(a * np.eye(3) + b * P123 + d * P132, c.entries, atol=1e-15)


@given(families, thetas)
def test_xy_round_trip_recovers_theta(family, theta):
    c = coin_from_theta(family, theta)
    back = coin_from_xy(family, c.x, c.y)
    assert np.allclose(back.entries, c.entries, atol=1e-12)
    d = abs(math.remainder(back.theta - theta, 2 * math.pi))
    assert d <= 1e-7


@given(families, thetas)
def test_inverse_is_transpose(family, theta):
    c = coin_from_theta(family, theta)
    assert np.allclose(inverse_coin(c).entries, c.entries.T, atol=1e-15)


@given(families, thetas)
def test_classify_identifies_family(family, theta):
    c = coin_from_theta(family, theta)
    got = classify(np.array(c.entries))
    assert got.family is family
    assert np.allclose(got.entries, c.entries, atol=1e-12)


def test_x_at_quarter_pi_value():
    # theta = pi/4 gives x = (1 + sqrt 2) / 3
    c = coin_from_theta("X", math.pi / 4)
    assert c.x == pytest.approx((1 + math.sqrt(2)) / 3, abs=1e-15)


def test_off_ellipse_rejected():
    with pytest.raises(ConstraintViolation):
        coin_from_xy("X", 0.5, 0.5)


def test_out_of_range_rejected():
    with pytest.raises(RangeError):
        coin_from_xy("X", -0.5, 0.0)
    with pytest.raises(RangeError):
        coin_from_xy("Y", 0.5, 0.0)


def test_classify_rejects_non_circulant():
    with pytest.raises(ConstraintViolation):
        classify(np.eye(3)[[1, 0, 2]])


def test_classify_rejects_bad_row_sum():
    with pytest.raises(ConstraintViolation):
        classify(np.zeros((3, 3)))


def test_dict_round_trip_is_exact():
    c = coin_from_theta("Y", 0.7)
    data = json.loads(json.dumps(c.to_dict()))
    back = CoinMatrix.from_dict(data)
    assert back.x == c.x and back.y == c.y
    assert np.array_equal(back.entries, c.entries)
