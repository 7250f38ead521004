"""
Property checks comparing the fast paths against the reference oracles.

Each check returns a ``CheckResult``; ``run_all`` is what the ``verify``
command executes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .coin import Family, coin_from_theta, inverse_coin
from .evolve import InitialCoinState, initial_state, iterate, run
from .limits import escaping_state, limit_measure, limit_params, localization_sum, measure_from_params
from .oracle import brute_force_amplitudes, numeric_eigensystem
from .spectral import amplitude_via_fourier, eigensystems, quadrature_nodes, u_tilde
from .velocity import dispersion, group_velocity

__all__ = ["CheckResult", "CHECKS", "run_all", "random_state"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    tol: float

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: worst={self.worst:.3e} tol={self.tol:.0e}"


def random_state(rng: np.random.Generator) -> InitialCoinState:
    v = rng.normal(size=3) + 1j * rng.normal(size=3)
    return InitialCoinState.normalized(v)


def _result(name: str, worst: float, tol: float) -> CheckResult:
    return CheckResult(name, bool(worst <= tol), float(worst), tol)


def _theta_grid(n: int) -> np.ndarray:
    # Offset grid that avoids the special angles of both families.
    return -np.pi + 2.0 * np.pi * (np.arange(n) + 0.37) / n


def check_dense_oracle(rng: np.random.Generator, pairs: int = 50, t_max: int = 12) -> CheckResult:
    worst = 0.0
    for _ in range(pairs):
        fam = Family.X if rng.random() < 0.5 else Family.Y
        coin = coin_from_theta(fam, rng.uniform(-np.pi, np.pi))
        init = random_state(rng)
        t = int(rng.integers(0, t_max + 1))
        ref = brute_force_amplitudes(coin, init, t)
        fast = run(initial_state(init), coin, t).amplitudes
        worst = max(worst, float(np.abs(ref - fast).max()))
    return _result("dense oracle vs evolve", worst, 1e-12)


def check_projectors(n: int = 64) -> CheckResult:
    worst = 0.0
    ks = quadrature_nodes(n)
    for fam in Family:
        for th in _theta_grid(n):
            coin = coin_from_theta(fam, th)
            om, vecs, _ = eigensystems(coin, ks)
            for i, k in enumerate(ks):
                ref = numeric_eigensystem(u_tilde(coin, k))
                for j in range(3):
                    p1 = np.outer(vecs[i, :, j], vecs[i, :, j].conj())
                    p2 = np.outer(ref.vectors[:, j], ref.vectors[:, j].conj())
                    worst = max(worst, float(np.abs(p1 - p2).max()))
                worst = max(worst, float(np.abs(np.exp(1j * om[i]) - np.exp(1j * ref.omegas)).max()))
    return _result("closed-form projectors vs numeric", worst, 1e-9)


def check_fourier(rng: np.random.Generator, t: int = 200, coins: int = 3) -> CheckResult:
    worst = 0.0
    for _ in range(coins):
        fam = Family.X if rng.random() < 0.5 else Family.Y
        coin = coin_from_theta(fam, rng.uniform(-np.pi, np.pi))
        init = random_state(rng)
        state = run(initial_state(init), coin, t)
        for m in range(-t, t + 1, 10):
            diff = amplitude_via_fourier(coin, init, m, t) - state.amplitude(m)
            worst = max(worst, float(np.abs(diff).max()))
    return _result("quadrature amplitudes vs evolve", worst, 1e-8)


def check_norm(rng: np.random.Generator, t: int = 2000) -> CheckResult:
    worst = 0.0
    for fam in Family:
        coin = coin_from_theta(fam, rng.uniform(-np.pi, np.pi))
        for state in iterate(initial_state(random_state(rng)), coin, t):
            pass
        worst = max(worst, abs(state.norm() - 1.0))
    return _result(f"norm conservation to t={t}", worst, 1e-12)


def check_constant_branch(n: int = 1024) -> CheckResult:
    worst = 0.0
    ks = quadrature_nodes(n)
    for fam in Family:
        target = 1.0 if fam is Family.X else -1.0
        for th in _theta_grid(32):
            coin = coin_from_theta(fam, th)
            om, vecs, _ = eigensystems(coin, ks)
            worst = max(worst, float(np.abs(np.exp(1j * om[:, 0]) - target).max()))
            # The constant eigenvalue must be genuine, not only asserted.
            for i in range(0, n, 97):
                u = u_tilde(coin, ks[i])
                worst = max(worst, float(np.abs(u @ vecs[i, :, 0] - target * vecs[i, :, 0]).max()))
    return _result("constant eigenvalue branch", worst, 1e-12)


def truncated_sum(coin, init, tol: float = 1e-14) -> float:
    """Direct sum of the limit measure until the geometric tail is negligible."""
    p = limit_params(coin, init)
    r = abs(p.base)
    M = 2 if r == 0 else int(math.ceil(math.log(tol) / (2.0 * math.log(r)))) + 2
    return float(sum(measure_from_params(p, m) for m in range(-M, M + 1)))


def check_localization_sum(rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for fam in Family:
        for th in _theta_grid(24):
            coin = coin_from_theta(fam, th)
            init = random_state(rng)
            worst = max(worst, abs(localization_sum(coin, init) - truncated_sum(coin, init)))
    return _result("localization closed form vs truncated sum", worst, 1e-8)


def check_escaping() -> CheckResult:
    worst = 0.0
    for fam in Family:
        for th in _theta_grid(64):
            coin = coin_from_theta(fam, th)
            esc = escaping_state(coin)
            worst = max(worst, max(limit_measure(coin, esc, m) for m in range(-3, 4)))
    return _result("escaping state limit measure", worst, 1e-12)


def check_inverse_invariance() -> CheckResult:
    worst = 0.0
    inits = (InitialCoinState.symmetric(), InitialCoinState.left_right())
    for fam in Family:
        for th in _theta_grid(64):
            coin = coin_from_theta(fam, th)
            inv = inverse_coin(coin)
            for init in inits:
                worst = max(worst, abs(limit_measure(coin, init, 0) - limit_measure(inv, init, 0)))
    return _result("inverse-coin invariance at m=0", worst, 1e-12)


def check_group_velocity(rng: np.random.Generator, samples: int = 200, h: float = 1e-5) -> CheckResult:
    worst = 0.0
    done = 0
    while done < samples:
        fam = Family.X if rng.random() < 0.5 else Family.Y
        th = rng.uniform(-np.pi, np.pi)
        k = rng.uniform(-np.pi, np.pi)
        om = float(dispersion(fam, th, k))
        if min(om, np.pi - om) < 1e-2:
            continue
        fd = (float(dispersion(fam, th, k + h)) - float(dispersion(fam, th, k - h))) / (2.0 * h)
        worst = max(worst, abs(group_velocity(fam, th, k) - fd))
        done += 1
    return _result("group velocity vs finite difference", worst, 1e-6)


CHECKS: dict[str, Callable[[np.random.Generator], CheckResult]] = {
    "dense": check_dense_oracle,
    "projectors": lambda rng: check_projectors(),
    "fourier": check_fourier,
    "norm": check_norm,
    "constant": lambda rng: check_constant_branch(),
    "locsum": check_localization_sum,
    "escaping": lambda rng: check_escaping(),
    "inverse": lambda rng: check_inverse_invariance(),
    "velocity": check_group_velocity,
}


def run_all(seed: int = 0, only=None) -> list[CheckResult]:
    results = []
    for name, fn in CHECKS.items():
        if only and name not in only:
            continue
        results.append(fn(np.random.default_rng([seed, len(results)])))
    return results
