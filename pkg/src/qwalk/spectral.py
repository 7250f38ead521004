"""
Momentum-space analysis: U~(k) = D(k) C with D(k) = diag(e^{ik}, 1, e^{-ik}).

For both coin families U~(k) has one k-independent eigenvalue (+1 for X,
-1 for Y) and a conjugate pair e^{+-i omega(k)} with

    X:  cos omega(k) = x cos k - (1 - x) / 2
    Y:  cos omega(k) = x cos k + (1 + x) / 2

The eigenvectors have closed forms in terms of the eigenvalue; for Y they
are written in terms of ``-lambda``, the corresponding eigenvalue of the
X-walk with coin ``-C``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .coin import CoinMatrix, Family
from .errors import DegenerateEigenvector, IllConditioned, QuadratureUnderresolved
from .oracle import numeric_eigensystem

__all__ = [
    "EigenSystem",
    "u_tilde",
    "dispersion_cos",
    "dispersion_omega",
    "eigensystem",
    "eigensystems",
    "eigenvector_norm_sq",
    "amplitude_via_fourier",
    "quadrature_nodes",
]

DENOM_TOL = 1e-12
NODES_PER_STEP = 16


@dataclass(frozen=True)
class EigenSystem:
    """
    Eigenpairs of U~(k). ``vectors[:, j]`` belongs to ``omegas[j]``.

    Index 0 is the constant branch, 1 carries +omega(k) in [0, pi] and 2
    carries -omega(k). ``fallback`` is set when the closed form was replaced
    by a numeric solve at this k.
    """

    k: float
    omegas: NDArray[np.float64]
    vectors: NDArray[np.complex128]
    fallback: bool = False

    @property
    def eigenvalues(self) -> NDArray[np.complex128]:
        return np.exp(1j * self.omegas)


def u_tilde(coin: CoinMatrix, k: float) -> NDArray[np.complex128]:
    """D(k) C as a 3x3 complex array."""
    d = np.array([np.exp(1j * k), 1.0, np.exp(-1j * k)])
    return d[:, None] * np.asarray(coin.entries)


def dispersion_cos(coin: CoinMatrix, k):
    """cos omega(k) of the moving branch, clipped to [-1, 1]."""
    k = np.asarray(k, dtype=np.float64)
    x = coin.x
    if coin.family is Family.X:
        val = x * np.cos(k) - (1.0 - x) / 2.0
    else:
        val = x * np.cos(k) + (1.0 + x) / 2.0
    return np.clip(val, -1.0, 1.0)


def dispersion_omega(coin: CoinMatrix, k):
    """
    omega(k) in [0, pi].

    Evaluated as 2*atan2(sqrt(1 - cos w), sqrt(1 + cos w)) with both factors
    written in terms of sin^2(k/2), which keeps full relative accuracy near
    the band edges where arccos does not.
    """
    k = np.asarray(k, dtype=np.float64)
    x = coin.x
    h = 2.0 * x * np.sin(k / 2.0) ** 2
    if coin.family is Family.X:
        one_minus, one_plus = h + 1.5 * (1.0 - x), -h + 0.5 * (1.0 + 3.0 * x)
    else:
        one_minus, one_plus = h + 0.5 * (1.0 - 3.0 * x), -h + 1.5 * (1.0 + x)
    return 2.0 * np.arctan2(np.sqrt(np.maximum(one_minus, 0.0)), np.sqrt(np.maximum(one_plus, 0.0)))


def eigenvector_norm_sq(coin: CoinMatrix, omega, k):
    """
    Squared norm of the unnormalized closed-form eigenvector at phase ``omega``.

    For Y the phase enters shifted by pi (the formula is that of the X-walk
    with coin -C).
    """
    x = coin.x
    if coin.family is Family.Y:
        x, omega = -x, np.asarray(omega) - np.pi
    num = 1.0 + x - 2.0 * x * np.cos(omega)
    return num / (1.0 + x - 2.0 * x * np.cos(omega - k)) + 1.0 + num / (
        1.0 + x - 2.0 * x * np.cos(omega + k)
    )


def _closed_form(coin: CoinMatrix, ks: NDArray[np.float64]):
    """Vectorized closed-form eigen-data; returns omegas, vectors, bad-node mask."""
    w = dispersion_omega(coin, ks)
    const = 0.0 if coin.family is Family.X else np.pi
    omegas = np.stack([np.full_like(w, const), w, -w], axis=1)
    lam = np.exp(1j * omegas)
    eik = np.exp(1j * ks)[:, None]
    if coin.family is Family.X:
        y, z = coin.y, 1.0 - coin.x - coin.y
        s = lam
    else:
        # Y reduces to the X form with (x, y) -> (-x, -y) and lambda -> -lambda.
        y, z = -coin.y, 1.0 + coin.x + coin.y
        s = -lam
    den1 = z + s * y / eik
    den3 = y + s * z * eik
    num1 = y + s * z
    num3 = z + s * y
    bad = (np.abs(den1) < DENOM_TOL) | (np.abs(den3) < DENOM_TOL)
    with np.errstate(divide="ignore", invalid="ignore"):
        f = np.stack([num1 / den1, np.ones_like(num1), num3 / den3], axis=1)  # (N, 3 comp, 3 branch)
        f = f / np.linalg.norm(f, axis=1, keepdims=True)
    bad = bad.any(axis=1) | (np.sin(w) < DENOM_TOL) | ~np.isfinite(f).all(axis=(1, 2))
    return omegas, f, bad


def _degenerate_pair(v1: NDArray[np.complex128]):
    # U~ restricted to the complement of v1 is a multiple of identity here.
    q, _ = np.linalg.qr(np.column_stack([v1, np.eye(3)]))
    return q[:, 1], q[:, 2]


def _fallback(coin: CoinMatrix, k: float, cf_omegas: NDArray[np.float64]):
    u = u_tilde(coin, k)
    try:
        num = numeric_eigensystem(u)
        return num.omegas, num.vectors
    except IllConditioned:
        pass
    # Double root of the moving pair: keep the constant eigenvector, complete the basis.
    lam0 = 1.0 if coin.family is Family.X else -1.0
    m = u - lam0 * np.eye(3)
    rows = [m[0], m[1], m[2]]
    v1 = max((np.cross(rows[i], rows[j]) for i, j in ((0, 1), (0, 2), (1, 2))), key=np.linalg.norm)
    if np.linalg.norm(v1) < DENOM_TOL:
        # U~ is a multiple of identity (permutation coin at k = 0); any basis works.
        return cf_omegas.copy(), np.eye(3, dtype=np.complex128)[:, [1, 0, 2]]
    v1 = v1 / np.linalg.norm(v1)
    v2, v3 = _degenerate_pair(v1)
    return cf_omegas.copy(), np.column_stack([v1, v2, v3])


def eigensystems(coin: CoinMatrix, ks, fallback: bool = True):
    """
    Eigen-data on an array of wavenumbers.

    Returns ``(omegas, vectors, fell_back)`` with shapes (N, 3), (N, 3, 3)
    and (N,). ``vectors[n, :, j]`` is the j-th eigenvector at ``ks[n]``.
    """
    ks = np.atleast_1d(np.asarray(ks, dtype=np.float64))
    omegas, vecs, bad = _closed_form(coin, ks)
    if bad.any():
        if not fallback:
            raise DegenerateEigenvector(
                f"closed-form denominator vanishes at k={ks[bad][0]!r} for {coin.family.value} x={coin.x!r}"
            )
        for n in np.flatnonzero(bad):
            omegas[n], vecs[n] = _fallback(coin, float(ks[n]), omegas[n])
    return omegas, vecs, bad


def eigensystem(coin: CoinMatrix, k: float, fallback: bool = True) -> EigenSystem:
    """
    Closed-form eigenpairs of U~(k).

    Raises
    ------
    DegenerateEigenvector
        If a closed-form denominator is below 1e-12 and ``fallback`` is False.
    """
    omegas, vecs, bad = eigensystems(coin, [k], fallback=fallback)
    return EigenSystem(float(k), omegas[0], vecs[0], bool(bad[0]))


def quadrature_nodes(n: int) -> NDArray[np.float64]:
    """Midpoint-shifted uniform grid on (-pi, pi]; avoids k = 0 and k = pi for even n."""
    return -np.pi + 2.0 * np.pi * (np.arange(n) + 0.5) / n


def amplitude_via_fourier(
    coin: CoinMatrix,
    init,
    m: int,
    t: int,
    nodes: int | None = None,
    branches=(0, 1, 2),
) -> NDArray[np.complex128]:
    """
    psi(m, t) from the spectral decomposition, by periodic trapezoid quadrature.

    ``branches`` selects which eigen-branches contribute; (0,) keeps only the
    constant branch, (1, 2) only the oscillating pair.

    Raises
    ------
    QuadratureUnderresolved
        If ``nodes`` < 16 * t.
    """
    need = NODES_PER_STEP * max(t, 1)
    if nodes is None:
        nodes = need + (need % 2)
    if nodes < NODES_PER_STEP * t:
        raise QuadratureUnderresolved(f"nodes={nodes} < {NODES_PER_STEP}*t={NODES_PER_STEP * t}")
    psi0 = np.asarray(
        [init.alpha, init.beta, init.gamma] if hasattr(init, "alpha") else init,
        dtype=np.complex128,
    )
    ks = quadrature_nodes(nodes)
    omegas, vecs, _ = eigensystems(coin, ks)
    sel = list(branches)
    omegas, vecs = omegas[:, sel], vecs[:, :, sel]
    overlap = np.einsum("nlj,l->nj", vecs.conj(), psi0)
    # D(k) sends chirality 1 to m - 1, so the inverse transform carries e^{+ikm}.
    weights = np.exp(1j * (omegas * t + ks[:, None] * m)) * overlap
    integrand = np.einsum("nlj,nj->nl", vecs, weights)
    return integrand.sum(axis=0) / nodes
