"""
Long-time limits lim_{t->inf} P(m, t) and localization diagnostics.

For a non-permutation coin the limit measure is carried entirely by the
constant eigenvalue branch and decays geometrically away from the origin
with base ``nu`` (family X) or ``mu`` (family Y), both in ``[2*sqrt(6)-5, 1)``.
Writing ``r`` for that base,

    lim P(m) = pref * ( |A r^|m| + B r^|m+1||^2
                      + |T1 r^|m| + T2 r^|m-1| + T3 r^|m+1||^2
                      + |A r^|m-1| + B r^|m||^2 )

with family-specific coefficients (A, B, T1..T3 for X; D, E, S1..S3 for Y,
stored in the same slots).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coin import CoinMatrix, Family
from .errors import NotPermutation, PermutationCoin
from .evolve import InitialCoinState

__all__ = [
    "LimitParams",
    "LocalizationVerdict",
    "decay_base",
    "limit_params",
    "limit_measure",
    "measure_from_params",
    "limit_profile",
    "limit_measure_permutation",
    "localization_sum",
    "escaping_state",
    "is_localized",
]

LOCALIZED_TOL = 1e-12


@dataclass(frozen=True)
class LimitParams:
    """
    Constants of the closed-form limit measure.

    ``base`` is nu (X) or mu (Y). ``a, b`` hold A, B (X) or D, E (Y);
    ``t1, t2, t3`` hold T1..T3 (X) or S1..S3 (Y).
    """

    family: Family
    base: float
    a: complex
    b: complex
    t1: complex
    t2: complex
    t3: complex
    prefactor: float

    @property
    def nu(self) -> float:
        return self.base


def _require_generic(coin: CoinMatrix) -> None:
    if coin.is_permutation:
        raise PermutationCoin(
            f"coin {coin.permutation} is a permutation matrix; use limit_measure_permutation"
        )


def _as_init(init) -> InitialCoinState:
    return init if isinstance(init, InitialCoinState) else InitialCoinState.from_vector(init)


def decay_base(family: Family | str, x: float) -> float:
    """
    nu (X) or mu (Y) as a function of x.

    Written in rationalized form, which is exact at x = 0 (value 0) and has
    no cancellation for small |x|.
    """
    family = Family(family)
    if family is Family.X:
        return 2.0 * x / (3.0 - x + math.sqrt(3.0 * (1.0 - x) * (x + 3.0)))
    return -2.0 * x / (x + 3.0 + math.sqrt(3.0 * (1.0 + x) * (3.0 - x)))


def limit_params(coin: CoinMatrix, init) -> LimitParams:
    """
    Raises
    ------
    PermutationCoin
        If ``coin`` is a (negative) permutation matrix.
    """
    _require_generic(coin)
    s = _as_init(init)
    al, be, ga = s.alpha, s.beta, s.gamma
    x, y = coin.x, coin.y
    base = decay_base(coin.family, x)
    if coin.family is Family.X:
        z = 1.0 - x - y
        a = al * (1 - x) + be * z
        b = ga * (1 - x) + be * y
        t1 = al * z + be * (1 + x) + ga * y
        t2 = al * y - be * x
        t3 = -be * x + ga * z
        pref = 1.0 / (3.0 * (1.0 - x) * (x + 3.0))
    else:
        w = 1.0 + x + y
        a = al * (1 + x) + be * w
        b = ga * (1 + x) - be * y
        t1 = al * w + be * (1 - x) - ga * y
        t2 = -al * y + be * x
        t3 = be * x + ga * w
        pref = 1.0 / (3.0 * (1.0 + x) * (3.0 - x))
    return LimitParams(coin.family, base, complex(a), complex(b), complex(t1), complex(t2), complex(t3), pref)


def measure_from_params(p: LimitParams, m: int) -> float:
    r = p.base

    def pw(n: int) -> float:
        return r ** abs(n)

    # Chirality 1 hops to m - 1, so A (driven by alpha) weights the left side.
    first = p.a * pw(m) + p.b * pw(m + 1)
    middle = p.t1 * pw(m) + p.t2 * pw(m - 1) + p.t3 * pw(m + 1)
    last = p.a * pw(m - 1) + p.b * pw(m)
    return p.prefactor * (abs(first) ** 2 + abs(middle) ** 2 + abs(last) ** 2)


def limit_measure(coin: CoinMatrix, init, m: int) -> float:
    """
    lim_{t->inf} P(m, t) for a non-permutation coin.

    Raises
    ------
    PermutationCoin
        If ``coin`` is a permutation matrix (use ``limit_measure_permutation``).
    """
    return measure_from_params(limit_params(coin, init), int(m))


def limit_profile(coin: CoinMatrix, init, ms) -> np.ndarray:
    """Limit measure over a range of sites; dispatches permutation coins to the table."""
    if coin.is_permutation:
        return np.array([limit_measure_permutation(coin, init, int(m)) for m in ms])
    p = limit_params(coin, init)
    return np.array([measure_from_params(p, int(m)) for m in ms])


def limit_measure_permutation(coin: CoinMatrix, init, m: int) -> float:
    """
    Time-averaged limit for a (negative) permutation coin.

    Cyclic permutation walks are exactly periodic with period 3, so P(m, t)
    has no pointwise limit; the value returned is the Cesaro mean. A coin
    ``-C`` gives the same probabilities as ``C``, so the Y cases reuse the X
    table.

    Raises
    ------
    NotPermutation
        If ``coin`` is not a permutation matrix.
    """
    if not coin.is_permutation:
        raise NotPermutation(f"coin (family {coin.family.value}, x={coin.x!r}) is not a permutation matrix")
    s = _as_init(init)
    pa, pb, pc = abs(s.alpha) ** 2, abs(s.beta) ** 2, abs(s.gamma) ** 2
    tag = coin.permutation.lstrip("-")
    if tag == "I":
        # Chiralities 1 and 3 run off ballistically; only the resting part stays.
        table = {0: pb}
    elif tag == "P123":
        table = {0: (1.0 + pb + pc) / 3.0, -1: (pb + pc) / 3.0, 1: 2.0 * pa / 3.0}
    else:
        table = {0: (1.0 + pa + pb) / 3.0, -1: 2.0 * pc / 3.0, 1: (pa + pb) / 3.0}
    return float(table.get(int(m), 0.0))


def localization_sum(coin: CoinMatrix, init) -> float:
    """
    sum over m in Z of the limit measure, in closed form.

    Uses sum r^{2|m|} = (1+r^2)/(1-r^2), sum r^{|m|+|m+1|} = 2r/(1-r^2) and
    sum r^{|m+1|+|m-1|} = r^2 (3-r^2)/(1-r^2).

    Raises
    ------
    PermutationCoin
    """
    p = limit_params(coin, init)
    r = p.base
    q = 1.0 - r * r
    ends = 2.0 * (abs(p.a) ** 2 + abs(p.b) ** 2)
    mids = abs(p.t1) ** 2 + abs(p.t2) ** 2 + abs(p.t3) ** 2
    total = (
        (1.0 + r * r) / q * (ends + mids)
        + 8.0 * r / q * (p.a * p.b.conjugate()).real
        + 4.0 * r / q * ((p.t1 * p.t2.conjugate()).real + (p.t1 * p.t3.conjugate()).real)
        + 2.0 * r * r * (3.0 - r * r) / q * (p.t2 * p.t3.conjugate()).real
    )
    return float(p.prefactor * total)


def escaping_state(coin: CoinMatrix) -> InitialCoinState:
    """
    The normalized initial state orthogonal to the constant-branch eigenvector.

    Its limit measure vanishes at every site.

    Raises
    ------
    PermutationCoin
    """
    _require_generic(coin)
    x, y = coin.x, coin.y
    if coin.family is Family.X:
        v = [1.0 - x - y, -(1.0 - x), y]
    else:
        v = [-(1.0 + x + y), 1.0 + x, y]
    return InitialCoinState.normalized(v)


@dataclass(frozen=True)
class LocalizationVerdict:
    """
    ``localized`` uses the limit at the origin; ``sum_positive`` is the
    secondary criterion based on the total retained probability.
    """

    localized: bool
    limit_p0: float
    total: float
    sum_positive: bool

    def __bool__(self) -> bool:
        return self.localized


def is_localized(coin: CoinMatrix, init, tol: float = LOCALIZED_TOL) -> LocalizationVerdict:
    """Localization verdict at the origin; works for every coin."""
    if coin.is_permutation:
        p0 = limit_measure_permutation(coin, init, 0)
        total = sum(limit_measure_permutation(coin, init, m) for m in (-1, 0, 1))
    else:
        p0 = limit_measure(coin, init, 0)
        total = localization_sum(coin, init)
    return LocalizationVerdict(p0 > tol, float(p0), float(total), total > tol)
