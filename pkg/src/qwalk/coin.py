"""
Generalized Grover coins: the circulant orthogonal families X and Y.

A coin is fully determined by its first row ``(x, y, z)``; the other rows
are cyclic shifts of it::

    [[x, y, z],
     [z, x, y],
     [y, z, x]]

Family X has ``z = 1 - x - y`` and determinant +1, family Y has
``z = -1 - x - y`` and determinant -1. Both are traced out by a single
angle ``theta`` in [-pi, pi]; the Grover coin is X at ``theta = pi`` and its
negative is Y at ``theta = 0``.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from numpy.typing import NDArray

from .errors import ConstraintViolation, RangeError

__all__ = [
    "Family",
    "CoinMatrix",
    "P123",
    "P132",
    "coin_from_theta",
    "coin_x_from_theta",
    "coin_y_from_theta",
    "coin_from_xy",
    "classify",
    "inverse_coin",
    "permutation_sum_coefficients",
    "grover",
    "ellipse_residual",
]

SQRT3 = math.sqrt(3.0)

ELLIPSE_TOL = 1e-10
PERMUTATION_TOL = 1e-9

# P123 moves chirality 2 -> 1, 3 -> 2, 1 -> 3 (first row (0, 1, 0)).
P123 = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])
P132 = P123.T.copy()
P123.setflags(write=False)
P132.setflags(write=False)


class Family(str, enum.Enum):
    X = "X"
    Y = "Y"

    @property
    def det(self) -> int:
        return 1 if self is Family.X else -1

    @property
    def x_range(self) -> tuple[float, float]:
        return (-1.0 / 3.0, 1.0) if self is Family.X else (-1.0, 1.0 / 3.0)


def _circulant(x: float, y: float, z: float) -> NDArray[np.float64]:
    return np.array([[x, y, z], [z, x, y], [y, z, x]], dtype=np.float64)


def _orthogonality_defect(x: float, y: float, z: float) -> Fraction:
    # Exact max |C^T C - I| entry of the circulant built from floats (x, y, z).
    fx, fy, fz = Fraction(x), Fraction(y), Fraction(z)
    return max(abs(fx * fx + fy * fy + fz * fz - 1), abs(fx * fy + fy * fz + fz * fx))


def _ulp_steps(v: float, n: int) -> float:
    for _ in range(abs(n)):
        v = math.nextafter(v, math.copysign(math.inf, n))
    return v


def _polish(x: float, y: float, z: float, radius: int = 1) -> tuple[float, float, float]:
    """
    Nudge (x, y, z) by at most ``radius`` ulps each to the float triple whose
    circulant is closest to orthogonal. Rounding of the analytic entries
    otherwise leaves a bias that makes the norm drift linearly in t.
    """
    best = (_orthogonality_defect(x, y, z), x, y, z)
    for dx, dy, dz in itertools.product(range(-radius, radius + 1), repeat=3):
        cand = (_ulp_steps(x, dx), _ulp_steps(y, dy), _ulp_steps(z, dz))
        err = _orthogonality_defect(*cand)
        if err < best[0]:
            best = (err, *cand)
    return best[1], best[2], best[3]


def _third(family: Family, x: float, y: float) -> float:
    return (1.0 - x - y) if family is Family.X else (-1.0 - x - y)


def ellipse_residual(family: Family | str, x: float, y: float) -> float:
    """Signed residual of the family's ellipse equation at (x, y)."""
    family = Family(family)
    if family is Family.X:
        return x * x + y * y - x - y + x * y
    return x * x + y * y + x + y + x * y


@dataclass(frozen=True, eq=False)
class CoinMatrix:
    """
    Immutable member of X or Y.

    ``entries`` is a read-only 3x3 float array. ``permutation`` names the
    coin when it is (minus) a permutation matrix, e.g. ``"I"``, ``"P123"``,
    ``"-P132"``; otherwise it is ``None``.
    """

    family: Family
    theta: float
    x: float
    y: float
    entries: NDArray[np.float64] = field(repr=False)
    permutation: str | None = None

    @property
    def z(self) -> float:
        return float(self.entries[0, 2])

    @property
    def is_permutation(self) -> bool:
        return self.permutation is not None

    @property
    def is_grover(self) -> bool:
        """True for the Grover coin (X) or its negative (Y)."""
        target = -1.0 / 3.0 if self.family is Family.X else 1.0 / 3.0
        return abs(self.x - target) <= PERMUTATION_TOL

    def __array__(self, dtype=None, copy=None):
        return np.array(self.entries, dtype=dtype)

    def to_dict(self) -> dict:
        return {
            "family": self.family.value,
            "theta": self.theta,
            "x": self.x,
            "y": self.y,
            "entries": self.entries.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CoinMatrix":
        coin = coin_from_xy(data["family"], float(data["x"]), float(data["y"]))
        if "entries" in data and not np.allclose(coin.entries, data["entries"], atol=ELLIPSE_TOL):
            raise ConstraintViolation("entries do not match (x, y)")
        return coin


def _permutation_tag(family: Family, x: float, y: float) -> str | None:
    sign = "" if family is Family.X else "-"
    unit = 1.0 if family is Family.X else -1.0
    # Both entries must match: near a permutation x moves only quadratically.
    if abs(x - unit) <= PERMUTATION_TOL and abs(y) <= PERMUTATION_TOL:
        return sign + "I"
    if abs(x) <= PERMUTATION_TOL:
        if abs(y - unit) <= PERMUTATION_TOL:
            return sign + "P123"
        if abs(y) <= PERMUTATION_TOL:
            return sign + "P132"
    return None


def _exact_permutation(tag: str) -> NDArray[np.float64]:
    base = {"I": np.eye(3), "P123": P123, "P132": P132}[tag.lstrip("-")]
    return -np.array(base) if tag.startswith("-") else np.array(base)


def _canonical_angle(theta: float) -> float:
    # -pi and pi name the same coin; keep +pi.
    if theta <= -math.pi + 1e-15:
        return math.pi
    return theta


def coin_from_theta(family: Family | str, theta: float) -> CoinMatrix:
    """Build the one-parameter coin of ``family`` at angle ``theta``."""
    family = Family(family)
    c, s = math.cos(theta), math.sin(theta)
    if family is Family.X:
        x = (1.0 + 2.0 * c) / 3.0
        y = (1.0 - c) / 3.0 + s / SQRT3
    else:
        x = (2.0 * c - 1.0) / 3.0
        y = -(1.0 + c) / 3.0 + s / SQRT3
    tag = _permutation_tag(family, x, y)
    if tag is not None:
        entries = _exact_permutation(tag)
        x, y = float(entries[0, 0]), float(entries[0, 1])
    else:
        x, y, z = _polish(x, y, _third(family, x, y))
        entries = _circulant(x, y, z)
    entries.setflags(write=False)
    return CoinMatrix(family, float(theta), x, y, entries, tag)


def coin_x_from_theta(theta: float) -> CoinMatrix:
    return coin_from_theta(Family.X, theta)


def coin_y_from_theta(theta: float) -> CoinMatrix:
    return coin_from_theta(Family.Y, theta)


def grover() -> CoinMatrix:
    return coin_from_theta(Family.X, math.pi)


def _theta_from_xy(family: Family, x: float, y: float) -> float:
    if family is Family.X:
        c = (3.0 * x - 1.0) / 2.0
        s = SQRT3 * (y - (1.0 - c) / 3.0)
    else:
        c = (3.0 * x + 1.0) / 2.0
        s = SQRT3 * (y + (1.0 + c) / 3.0)
    if abs(s) <= 1e-12:
        return 0.0 if c > 0 else math.pi
    return _canonical_angle(math.atan2(s, c))


def coin_from_xy(family: Family | str, x: float, y: float) -> CoinMatrix:
    """
    Validate (x, y) against the family's ellipse and build the coin.

    The returned coin is rebuilt from the recovered angle, so its entries
    satisfy the orthogonality invariants to machine precision.

    Raises
    ------
    ConstraintViolation
        If the ellipse residual exceeds 1e-10.
    RangeError
        If ``x`` is outside the family's range.
    """
    family = Family(family)
    lo, hi = family.x_range
    if not (lo - ELLIPSE_TOL <= x <= hi + ELLIPSE_TOL):
        raise RangeError(f"x={x!r} outside [{lo:.6g}, {hi:.6g}] for family {family.value}")
    resid = ellipse_residual(family, x, y)
    if abs(resid) > ELLIPSE_TOL:
        raise ConstraintViolation(
            f"(x, y)=({x!r}, {y!r}) is off the {family.value} ellipse (residual {resid:.3e})"
        )
    theta = _theta_from_xy(family, x, y)
    coin = coin_from_theta(family, theta)
    if abs(coin.x - x) > ELLIPSE_TOL or abs(coin.y - y) > ELLIPSE_TOL:
        raise ConstraintViolation(f"angle recovery failed for (x, y)=({x!r}, {y!r})")
    return coin


def classify(matrix) -> CoinMatrix:
    """Identify a raw 3x3 array as a member of X or Y."""
    m = np.asarray(matrix, dtype=np.float64)
    if m.shape != (3, 3):
        raise ConstraintViolation(f"expected a 3x3 matrix, got shape {m.shape}")
    row = m[0]
    if not np.allclose(m, _circulant(row[0], row[1], row[2]), atol=ELLIPSE_TOL):
        raise ConstraintViolation("matrix is not circulant")
    total = row.sum()
    if abs(total - 1.0) <= ELLIPSE_TOL:
        family = Family.X
    elif abs(total + 1.0) <= ELLIPSE_TOL:
        family = Family.Y
    else:
        raise ConstraintViolation(f"row sum {total!r} is neither +1 nor -1")
    return coin_from_xy(family, float(row[0]), float(row[1]))


def inverse_coin(coin: CoinMatrix) -> CoinMatrix:
    """Return the inverse (= transpose) coin, which sits at angle ``-theta``."""
    return coin_from_theta(coin.family, _canonical_angle(-coin.theta))


def permutation_sum_coefficients(coin: CoinMatrix) -> tuple[float, float, float]:
    """Coefficients (c_I, c_123, c_132) with C = c_I I + c_123 P123 + c_132 P132."""
    return (coin.x, coin.y, coin.z)
