"""Three-state discrete-time quantum walks on the line with generalized Grover coins."""

from __future__ import annotations

from .coin import CoinMatrix, Family, classify, coin_from_theta, coin_from_xy, grover, inverse_coin
from .errors import QWalkError
from .evolve import InitialCoinState, WalkState, initial_state, iterate, return_probabilities, run, step, time_averaged_return
from .limits import escaping_state, is_localized, limit_measure, limit_measure_permutation, localization_sum
from .spectral import amplitude_via_fourier, eigensystem, u_tilde
from .velocity import dispersion, group_velocity, peak_velocities, stationary_points

__version__ = "0.1.0"

__all__ = [
    "CoinMatrix",
    "Family",
    "InitialCoinState",
    "QWalkError",
    "WalkState",
    "amplitude_via_fourier",
    "classify",
    "coin_from_theta",
    "coin_from_xy",
    "dispersion",
    "eigensystem",
    "escaping_state",
    "grover",
    "group_velocity",
    "initial_state",
    "inverse_coin",
    "is_localized",
    "iterate",
    "limit_measure",
    "limit_measure_permutation",
    "localization_sum",
    "peak_velocities",
    "return_probabilities",
    "run",
    "stationary_points",
    "step",
    "time_averaged_return",
    "u_tilde",
]
