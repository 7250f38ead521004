"""
Dispersion, stationary points and peak velocities of the propagating fronts.

With ``cos omega(k) = a cos k + b`` the group velocity is
``d omega / dk = a sin k / sin omega``. Its extremum (the stationary point
of the phase, where d^2 omega/dk^2 = 0) satisfies a quadratic in
``u = cos k``::

    a b u^2 + (a^2 + b^2 - 1) u + a b = 0

whose roots multiply to 1, so at most one of them lies in [-1, 1]. The
second stationary wavenumber therefore never exists on the real line and
is reported as absent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coin import CoinMatrix, Family, coin_from_theta
from .errors import BandEdge, SpecialTheta
from .spectral import dispersion_omega

__all__ = [
    "VelocityProfile",
    "dispersion",
    "group_velocity",
    "stationary_points",
    "branch_velocity",
    "peak_velocities",
    "predicted_peak_positions",
    "special_case",
]

BAND_EDGE_TOL = 1e-12
SPECIAL_TOL = 1e-9
INV_SQRT3 = 1.0 / math.sqrt(3.0)


@dataclass(frozen=True)
class VelocityProfile:
    """
    Peak velocities for one coin angle.

    ``k0_2``, ``vL2`` and ``vR2`` are ``None`` when the second branch does
    not exist.
    """

    theta: float
    family: Family
    k0_1: float | None
    k0_2: float | None
    vL1: float
    vR1: float
    vL2: float | None = None
    vR2: float | None = None
    vS: float = 0.0

    def velocities(self) -> list[float]:
        return [v for v in (self.vL1, self.vR1, self.vL2, self.vR2) if v is not None]


def _coefficients(family: Family, x: float) -> tuple[float, float]:
    return (x, -(1.0 - x) / 2.0) if family is Family.X else (x, (1.0 + x) / 2.0)


def dispersion(family: Family | str, theta: float, k):
    """omega(k) in [0, pi] for the coin at angle ``theta``."""
    return dispersion_omega(coin_from_theta(family, theta), k)


def _group_velocity(coin: CoinMatrix, k: float) -> float:
    s = math.sin(float(dispersion_omega(coin, k)))
    if abs(s) <= BAND_EDGE_TOL:
        raise BandEdge(f"sin(omega) = {s:.3e} at k={k!r}")
    return coin.x * math.sin(k) / s


def group_velocity(family: Family | str, theta: float, k: float) -> float:
    """
    d omega / dk on the positive branch.

    Raises
    ------
    BandEdge
        If sin(omega(k)) vanishes.
    """
    return _group_velocity(coin_from_theta(family, theta), k)


def special_case(family: Family | str, theta: float) -> tuple[float, float] | None:
    """(vL, vR) for the tabulated angles, ``None`` elsewhere."""
    family = Family(family)
    c = math.cos(theta)
    if family is Family.X:
        if abs(c - 1.0) <= SPECIAL_TOL:
            return (1.0, -1.0)
        if abs(1.0 + 2.0 * c) <= SPECIAL_TOL:
            return (0.0, 0.0)
        if abs(c + 1.0) <= SPECIAL_TOL:
            return (-INV_SQRT3, INV_SQRT3)
    else:
        if abs(c + 1.0) <= SPECIAL_TOL:
            return (-1.0, 1.0)
        if abs(2.0 * c - 1.0) <= SPECIAL_TOL:
            return (0.0, 0.0)
        if abs(c - 1.0) <= SPECIAL_TOL:
            return (INV_SQRT3, -INV_SQRT3)
    return None


def stationary_points(family: Family | str, theta: float) -> tuple[float, float | None]:
    """
    Stationary wavenumbers (k0_1 in [0, pi], k0_2).

    ``k0_2`` is always ``None``: the second root of the quadratic in cos k
    is the reciprocal of the first.

    Raises
    ------
    SpecialTheta
        At permutation and (negative) Grover angles.
    """
    family = Family(family)
    if special_case(family, theta) is not None:
        raise SpecialTheta(f"theta={theta!r} is a special angle for family {family.value}")
    a, b = _coefficients(family, coin_from_theta(family, theta).x)
    qa = a * b
    qb = a * a + b * b - 1.0
    disc = max(qb * qb - 4.0 * qa * qa, 0.0)
    q = -0.5 * (qb + math.copysign(math.sqrt(disc), qb))
    u = qa / q  # root of smaller magnitude; the other is q / qa = 1 / u
    return math.acos(min(1.0, max(-1.0, u))), None


def branch_velocity(family: Family | str, theta: float) -> float:
    """
    vL1 from its explicit expression in cos(theta), with the branch sign
    taken from the sign of 1 + 2 cos(theta) (X) or 2 cos(theta) - 1 (Y).
    """
    family = Family(family)
    c = math.cos(theta)
    if family is Family.X:
        r = math.sqrt(c * c + 6.0 * c + 5.0)
        mag = math.sqrt((9.0 * r - (15.0 * c + 21.0)) / (r - (c + 3.0))) / 3.0
        return math.copysign(mag, 1.0 + 2.0 * c)
    r = math.sqrt(c * c - 6.0 * c + 5.0)
    mag = math.sqrt((9.0 * r + (15.0 * c - 21.0)) / (r + (c - 3.0))) / 3.0
    return math.copysign(mag, 2.0 * c - 1.0)


def peak_velocities(family: Family | str, theta: float) -> VelocityProfile:
    """Full profile; special angles come from the table."""
    family = Family(family)
    special = special_case(family, theta)
    if special is not None:
        grover_like = abs(math.cos(theta) - (-1.0 if family is Family.X else 1.0)) <= SPECIAL_TOL
        return VelocityProfile(theta, family, 0.0 if grover_like else None, None, special[0], special[1])
    k0, _ = stationary_points(family, theta)
    v = _group_velocity(coin_from_theta(family, theta), k0)
    return VelocityProfile(theta, family, k0, None, v, -v)


def predicted_peak_positions(profile: VelocityProfile, t: int) -> list[int]:
    """Sorted distinct peak sites round(v t) for nonzero velocities, plus 0."""
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    sites = {0}
    for v in profile.velocities():
        if v != 0.0:
            sites.add(int(np.rint(v * t)))
    return sorted(sites)
