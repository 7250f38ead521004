"""
Direct-space evolution of the three-state walk on the integer line.

One step is ``U = S (I (x) C)``: the coin acts on every site, then chirality
1 hops to ``m - 1``, chirality 2 stays and chirality 3 hops to ``m + 1``.
The state is a dense window of amplitudes covering ``[origin - t, origin + t]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np
from numpy.typing import NDArray

from .coin import CoinMatrix
from .errors import NormError

__all__ = [
    "InitialCoinState",
    "WalkState",
    "initial_state",
    "step",
    "run",
    "iterate",
    "probability",
    "probability_by_chirality",
    "return_probabilities",
    "time_averaged_return",
    "side_lobe_peaks",
]

NORM_TOL = 1e-9


@dataclass(frozen=True)
class InitialCoinState:
    """Chirality amplitudes (alpha, beta, gamma) of the walker at the origin."""

    alpha: complex
    beta: complex
    gamma: complex

    def __post_init__(self):
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2 + abs(self.gamma) ** 2
        if abs(norm - 1.0) > NORM_TOL:
            raise NormError(f"|alpha|^2+|beta|^2+|gamma|^2 = {norm!r}, expected 1")

    @classmethod
    def from_vector(cls, vec) -> "InitialCoinState":
        a, b, c = (complex(v) for v in vec)
        return cls(a, b, c)

    @classmethod
    def normalized(cls, vec) -> "InitialCoinState":
        v = np.asarray(vec, dtype=np.complex128)
        return cls.from_vector(v / np.linalg.norm(v))

    @classmethod
    def symmetric(cls) -> "InitialCoinState":
        s = 1.0 / np.sqrt(3.0)
        return cls(s, s, s)

    @classmethod
    def left_right(cls) -> "InitialCoinState":
        s = 1.0 / np.sqrt(2.0)
        return cls(s, 0.0, s)

    def as_array(self) -> NDArray[np.complex128]:
        return np.array([self.alpha, self.beta, self.gamma], dtype=np.complex128)


@dataclass
class WalkState:
    """
    Amplitudes on the window of sites ``start .. start + len(amplitudes) - 1``.

    ``amplitudes[i, l-1]`` is psi_l(start + i, time).
    """

    amplitudes: NDArray[np.complex128]
    start: int
    time: int = 0
    origin: int = 0

    @property
    def sites(self) -> NDArray[np.int64]:
        return np.arange(self.start, self.start + self.amplitudes.shape[0])

    @property
    def stop(self) -> int:
        """One past the last site of the window."""
        return self.start + self.amplitudes.shape[0]

    def amplitude(self, m: int) -> NDArray[np.complex128]:
        i = m - self.start
        if 0 <= i < self.amplitudes.shape[0]:
            return self.amplitudes[i].copy()
        return np.zeros(3, dtype=np.complex128)

    def probabilities(self) -> NDArray[np.float64]:
        """P(m, t) for every site of the window."""
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)

    def chirality_probabilities(self) -> NDArray[np.float64]:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def copy(self) -> "WalkState":
        return WalkState(self.amplitudes.copy(), self.start, self.time, self.origin)


def _coin_array(coin) -> NDArray[np.float64]:
    return np.asarray(coin.entries if isinstance(coin, CoinMatrix) else coin)


def initial_state(coin_state: InitialCoinState | tuple | list, origin: int = 0) -> WalkState:
    """
    Walker localized at ``origin`` with chirality vector ``coin_state``.

    Raises
    ------
    NormError
        If the coin state is not normalized to within 1e-9.
    """
    if not isinstance(coin_state, InitialCoinState):
        coin_state = InitialCoinState.from_vector(coin_state)
    amps = coin_state.as_array().reshape(1, 3)
    return WalkState(amps, start=origin, time=0, origin=origin)


def _advance(buf: NDArray[np.complex128], lo: int, hi: int, cT: NDArray) -> None:
    # Active window buf[lo:hi] grows to buf[lo-1:hi+1]; caller guarantees room.
    mixed = buf[lo:hi] @ cT
    buf[lo - 1 : hi + 1] = 0.0
    buf[lo - 1 : hi - 1, 0] = mixed[:, 0]
    buf[lo:hi, 1] = mixed[:, 1]
    buf[lo + 1 : hi + 1, 2] = mixed[:, 2]


def step(state: WalkState, coin: CoinMatrix) -> WalkState:
    """Apply one step of the walk and return the new state."""
    n = state.amplitudes.shape[0]
    buf = np.zeros((n + 2, 3), dtype=np.complex128)
    buf[1 : n + 1] = state.amplitudes
    _advance(buf, 1, n + 1, _coin_array(coin).T)
    return WalkState(buf, state.start - 1, state.time + 1, state.origin)


def iterate(state: WalkState, coin: CoinMatrix, t: int) -> Iterator[WalkState]:
    """
    Yield the state after each of ``t`` steps.

    The yielded states are views into a shared buffer that is overwritten by
    the next step; copy them if they must outlive the iteration.
    """
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    n = state.amplitudes.shape[0]
    buf = np.zeros((n + 2 * t, 3), dtype=np.complex128)
    buf[t : t + n] = state.amplitudes
    cT = _coin_array(coin).T
    lo, hi = t, t + n
    for s in range(1, t + 1):
        _advance(buf, lo, hi, cT)
        lo, hi = lo - 1, hi + 1
        yield WalkState(buf[lo:hi], state.start - s, state.time + s, state.origin)


def run(state: WalkState, coin: CoinMatrix, t: int) -> WalkState:
    """Apply ``t`` steps; ``run(state, coin, 0)`` returns a copy of ``state``."""
    out = state
    for out in iterate(state, coin, t):
        pass
    return out.copy()


def probability(state: WalkState, m: int) -> float:
    a = state.amplitude(m)
    return float(np.sum(np.abs(a) ** 2))


def probability_by_chirality(state: WalkState, m: int, l: int) -> float:
    if l not in (1, 2, 3):
        raise ValueError(f"chirality must be 1, 2 or 3, got {l}")
    return float(abs(state.amplitude(m)[l - 1]) ** 2)


def return_probabilities(coin: CoinMatrix, init, t_max: int, m: int = 0) -> NDArray[np.float64]:
    """P(m, t) for t = 0 .. t_max from one incremental run started at 0."""
    state = initial_state(init)
    out = np.empty(t_max + 1)
    out[0] = probability(state, m)
    for s, st in enumerate(iterate(state, coin, t_max), start=1):
        i = m - st.start
        out[s] = float(np.sum(np.abs(st.amplitudes[i]) ** 2)) if 0 <= i < st.amplitudes.shape[0] else 0.0
    return out


def time_averaged_return(coin: CoinMatrix, init, T: int) -> float:
    """(1/T) * sum_{t=0}^{T-1} P(0, t), including the t = 0 term."""
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    return float(np.mean(return_probabilities(coin, init, T - 1)))


def side_lobe_peaks(state: WalkState, min_offset: int = 5) -> tuple[int | None, int | None]:
    """
    Sites of the left and right side-lobe maxima of P(., t).

    The search excludes ``|m - origin| < min_offset`` so the localized central
    peak does not win. Returns ``None`` for a side with no sites.
    """
    probs = state.probabilities()
    rel = state.sites - state.origin
    out = []
    for mask in (rel <= -min_offset, rel >= min_offset):
        idx = np.flatnonzero(mask)
        out.append(int(state.sites[idx[np.argmax(probs[idx])]]) if idx.size else None)
    return out[0], out[1]
