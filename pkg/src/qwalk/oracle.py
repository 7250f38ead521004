"""
Slow, independent reference implementations used to cross-check the fast paths.

Nothing here shares code with ``evolve`` or ``spectral`` beyond the coin
type: the dense operator is assembled from Kronecker products, the 3x3
eigensolver works from the characteristic cubic, and the empirical limit
uses its own lattice update.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .coin import CoinMatrix
from .errors import IllConditioned, SizeExceeded

__all__ = [
    "DenseWalkOperator",
    "NumericEigenSystem",
    "dense_operator",
    "brute_force_amplitudes",
    "brute_force_distribution",
    "numeric_eigensystem",
    "empirical_limit",
]

MAX_DENSE_T = 64


@dataclass(frozen=True)
class DenseWalkOperator:
    """U = S (I (x) C) on a ring of ``2 * t_max + 1`` sites, basis index 3*i + (l-1)."""

    t_max: int
    matrix: NDArray[np.complex128]

    @property
    def n_sites(self) -> int:
        return 2 * self.t_max + 1


def dense_operator(coin: CoinMatrix, t_max: int) -> DenseWalkOperator:
    """
    Materialize the walk operator on a ring just large enough for ``t_max`` steps.

    A walker started at the centre never reaches the seam within ``t_max``
    steps, so the ring behaves like the infinite line.
    """
    if t_max > MAX_DENSE_T:
        raise SizeExceeded(f"t_max={t_max} exceeds {MAX_DENSE_T}")
    n = 2 * t_max + 1
    eye = np.eye(n)
    left = np.roll(eye, -1, axis=0)  # |m-1><m|
    right = np.roll(eye, 1, axis=0)  # |m+1><m|
    proj = [np.diag(v) for v in np.eye(3)]
    shift = np.kron(left, proj[0]) + np.kron(eye, proj[1]) + np.kron(right, proj[2])
    u = shift @ np.kron(eye, np.asarray(coin.entries))
    return DenseWalkOperator(t_max, u.astype(np.complex128))


def brute_force_amplitudes(coin: CoinMatrix, init, t: int) -> NDArray[np.complex128]:
    """Amplitudes psi_l(m, t) for m = -t .. t as a (2t+1, 3) array."""
    op = dense_operator(coin, max(t, 0))
    psi = np.zeros(3 * op.n_sites, dtype=np.complex128)
    c = op.t_max
    psi[3 * c : 3 * c + 3] = np.asarray(
        [init.alpha, init.beta, init.gamma] if hasattr(init, "alpha") else init,
        dtype=np.complex128,
    )
    for _ in range(t):
        psi = op.matrix @ psi
    return psi.reshape(op.n_sites, 3)


def brute_force_distribution(coin: CoinMatrix, init, t: int) -> list[tuple[int, float]]:
    """List of (m, P(m, t)) for m = -t .. t."""
    amps = brute_force_amplitudes(coin, init, t)
    probs = np.sum(np.abs(amps) ** 2, axis=1)
    return [(m, float(p)) for m, p in zip(range(-t, t + 1), probs)]


@dataclass(frozen=True)
class NumericEigenSystem:
    omegas: NDArray[np.float64]
    vectors: NDArray[np.complex128]  # columns are eigenvectors


def _charpoly(u: NDArray[np.complex128]) -> tuple[complex, complex, complex]:
    """Coefficients (c2, c1, c0) of lambda^3 + c2 lambda^2 + c1 lambda + c0."""
    tr = np.trace(u)
    minors = (
        u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0]
        + u[0, 0] * u[2, 2] - u[0, 2] * u[2, 0]
        + u[1, 1] * u[2, 2] - u[1, 2] * u[2, 1]
    )
    return -tr, minors, -np.linalg.det(u)


def _null_vector(m: NDArray[np.complex128]) -> NDArray[np.complex128]:
    rows = [m[0], m[1], m[2]]
    best = max(
        (np.cross(rows[i], rows[j]) for i, j in ((0, 1), (0, 2), (1, 2))),
        key=np.linalg.norm,
    )
    return best / np.linalg.norm(best)


def numeric_eigensystem(u, disc_tol: float = 1e-14) -> NumericEigenSystem:
    """
    Eigen-decompose a momentum-space walk operator via its characteristic cubic.

    The constant root (+1 for det = +1, -1 for det = -1) is deflated out and
    the remaining quadratic is solved in closed form. Eigenvectors come from
    cross products of rows of ``U - lambda I``.

    Raises
    ------
    IllConditioned
        If the deflated quadratic has a double root (discriminant below
        ``disc_tol`` in magnitude).
    """
    u = np.asarray(u, dtype=np.complex128)
    c2, c1, c0 = _charpoly(u)
    det = np.linalg.det(u)
    lam0 = 1.0 if det.real > 0 else -1.0
    b1 = c2 + lam0
    b0 = c1 + lam0 * b1
    disc = b1 * b1 - 4.0 * b0
    if abs(disc) < disc_tol:
        raise IllConditioned(f"double root in deflated quadratic (|disc|={abs(disc):.2e})")
    root = np.sqrt(disc)
    lam_a = (-b1 + root) / 2.0
    lam_b = (-b1 - root) / 2.0
    lam2, lam3 = (lam_a, lam_b) if np.angle(lam_a) >= np.angle(lam_b) else (lam_b, lam_a)
    lams = [complex(lam0), lam2, lam3]
    vecs = np.column_stack([_null_vector(u - lam * np.eye(3)) for lam in lams])
    omegas = np.array([np.angle(lam) for lam in lams])
    if lam0 < 0:
        omegas[0] = np.pi
    return NumericEigenSystem(omegas, vecs)


def empirical_limit(
    coin: CoinMatrix, init, m: int, t_max: int, window: int | None = None
) -> float:
    """
    Mean of P(m, t) over t in [t_max - window, t_max].

    ``window`` defaults to 10% of ``t_max``.
    """
    if window is None:
        window = max(1, t_max // 10)
    if window > t_max / 2:
        raise ValueError(f"window={window} must be <= t_max/2={t_max / 2}")
    c = np.asarray(coin.entries, dtype=np.complex128)
    n = 2 * t_max + 1
    left = np.zeros(n, dtype=np.complex128)
    stay = np.zeros(n, dtype=np.complex128)
    right = np.zeros(n, dtype=np.complex128)
    v = np.asarray(
        [init.alpha, init.beta, init.gamma] if hasattr(init, "alpha") else init,
        dtype=np.complex128,
    )
    left[t_max], stay[t_max], right[t_max] = v
    i = t_max + m
    total = 0.0
    count = 0
    for t in range(t_max + 1):
        if t >= t_max - window:
            if 0 <= i < n:
                total += abs(left[i]) ** 2 + abs(stay[i]) ** 2 + abs(right[i]) ** 2
            count += 1
        if t == t_max:
            break
        a = c[0, 0] * left + c[0, 1] * stay + c[0, 2] * right
        b = c[1, 0] * left + c[1, 1] * stay + c[1, 2] * right
        d = c[2, 0] * left + c[2, 1] * stay + c[2, 2] * right
        left = np.concatenate((a[1:], [0.0]))
        stay = b
        right = np.concatenate(([0.0], d[:-1]))
    return float(total / count)
