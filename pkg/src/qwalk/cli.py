"""
Command-line front end.

    qwalk simulate --family X --theta pi --init symmetric --t 5000
    qwalk limit    --family X --theta pi --m-window -10..10
    qwalk localize --family X --theta pi --init escaping
    qwalk velocity --family Y --theta pi/6
    qwalk sweep    --family X --grid 721 --quantity limit_p0
    qwalk verify

Exit codes: 0 success, 2 configuration error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import checks
from .coin import CoinMatrix, Family, coin_from_theta, coin_from_xy
from .errors import QWalkError
from .evolve import InitialCoinState, initial_state, run, side_lobe_peaks
from .io import csv_text, emit, json_text
from .limits import escaping_state, is_localized, limit_measure_permutation, limit_profile, localization_sum
from .spectral import eigensystems, quadrature_nodes
from .velocity import peak_velocities, predicted_peak_positions

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VERIFY = 3

COMMANDS = ("simulate", "limit", "localize", "velocity", "sweep", "verify")

_PI_RE = re.compile(r"^([+-]?)(\d+(?:\.\d*)?|\.\d+)?\*?pi(?:/(\d+))?$")


class ConfigError(ValueError):
    pass


def parse_theta(text: str) -> float:
    """
    Parse an angle: a float, or a rational multiple of pi such as
    ``pi``, ``-pi/2``, ``2pi/3``, ``3*pi/4``.
    """
    s = text.strip().replace(" ", "").lower()
    m = _PI_RE.match(s)
    if m:
        sign, num, den = m.groups()
        frac = Fraction(num or "1") / Fraction(den or "1")
        if sign == "-":
            frac = -frac
        return float(frac) * math.pi
    try:
        return float(s)
    except ValueError:
        raise ConfigError(f"cannot parse angle {text!r}") from None


def parse_complex(text: str) -> complex:
    s = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(s)
    except ValueError:
        raise ConfigError(f"cannot parse complex number {text!r}") from None


def parse_init(text: str, coin: CoinMatrix) -> InitialCoinState:
    key = text.strip().lower()
    if key == "symmetric":
        return InitialCoinState.symmetric()
    if key == "lr":
        return InitialCoinState.left_right()
    if key == "escaping":
        return escaping_state(coin)
    parts = text.split(",")
    if len(parts) != 3:
        raise ConfigError(f"init must be symmetric, lr, escaping or three comma-separated amplitudes, got {text!r}")
    return InitialCoinState.from_vector([parse_complex(p) for p in parts])


def parse_window(text: str) -> range:
    m = re.match(r"^\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$", text)
    if not m:
        raise ConfigError(f"m-window must look like -10..10, got {text!r}")
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo > hi:
        raise ConfigError(f"empty m-window {text!r}")
    return range(lo, hi + 1)


def resolve_threads(requested: int | None) -> int:
    env = os.environ.get("QWALK_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ConfigError(f"QWALK_THREADS must be an integer, got {env!r}") from None
    else:
        n = requested if requested is not None else 1
    if n < 1:
        raise ConfigError(f"thread count must be >= 1, got {n}")
    return n


@dataclass
class RunConfig:
    command: str
    family: Family
    theta: float | None
    xy: tuple[float, float] | None
    init_text: str
    t: int
    m_window: range | None
    output: str | None
    fmt: str
    threads: int
    grid: int
    quantity: str
    dispersion_nodes: int | None
    seed: int

    def coin(self) -> CoinMatrix:
        if self.xy is not None:
            return coin_from_xy(self.family, *self.xy)
        return coin_from_theta(self.family, self.theta)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qwalk", description="Three-state quantum walks with generalized Grover coins.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--family", choices=["X", "Y"], default="X")
    p.add_argument("--theta", help="coin angle: float or multiple of pi (pi/2, -2pi/3)")
    p.add_argument("--x", type=float, help="coin parameter x (with --y, instead of --theta)")
    p.add_argument("--y", type=float, help="coin parameter y")
    p.add_argument("--init", default="symmetric", help="symmetric, lr, escaping or 'a,b,c' (complex, e.g. 0.5+0.5i)")
    p.add_argument("--t", type=int, default=100, help="number of steps")
    p.add_argument("--m-window", help="site range lo..hi")
    p.add_argument("--output", "-o", help="output file (default stdout)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--threads", type=int, help="worker threads for sweeps (QWALK_THREADS overrides)")
    p.add_argument("--grid", type=int, default=361, help="number of theta points in a sweep")
    p.add_argument("--quantity", choices=["limit_p0", "velocity"], default="limit_p0")
    p.add_argument("--dispersion", type=int, metavar="N", help="velocity: dump omega_j(k) on N k-nodes instead")
    p.add_argument("--seed", type=int, default=0, help="verify: random seed")
    return p


def make_config(args: argparse.Namespace) -> RunConfig:
    has_xy = args.x is not None or args.y is not None
    if has_xy and args.theta is not None:
        raise ConfigError("give either --theta or --x/--y, not both")
    if has_xy and (args.x is None or args.y is None):
        raise ConfigError("--x and --y must be given together")
    needs_coin = args.command not in ("sweep", "verify")
    if needs_coin and not has_xy and args.theta is None:
        raise ConfigError(f"{args.command} needs --theta or --x/--y")
    if args.t < 0:
        raise ConfigError(f"--t must be non-negative, got {args.t}")
    if args.grid < 1:
        raise ConfigError(f"--grid must be positive, got {args.grid}")
    return RunConfig(
        command=args.command,
        family=Family(args.family),
        theta=parse_theta(args.theta) if args.theta is not None else None,
        xy=(args.x, args.y) if has_xy else None,
        init_text=args.init,
        t=args.t,
        m_window=parse_window(args.m_window) if args.m_window else None,
        output=args.output,
        fmt=args.format,
        threads=resolve_threads(args.threads),
        grid=args.grid,
        quantity=args.quantity,
        dispersion_nodes=args.dispersion,
        seed=args.seed,
    )


def _render(cfg: RunConfig, header, rows, meta=None) -> str:
    if cfg.fmt == "json":
        return json_text(header, rows, meta)
    return csv_text(header, rows)


def _summary(meta: dict) -> str:
    return " ".join(f"{k}={v!r}" if isinstance(v, float) else f"{k}={v}" for k, v in meta.items())


def cmd_simulate(cfg: RunConfig) -> int:
    coin = cfg.coin()
    init = parse_init(cfg.init_text, coin)
    state = run(initial_state(init), coin, cfg.t)
    chir = state.chirality_probabilities()
    probs = state.probabilities()
    window = cfg.m_window or range(state.start, state.stop)
    rows = []
    for m in window:
        i = m - state.start
        if 0 <= i < probs.size:
            rows.append((m, float(probs[i]), float(chir[i, 0]), float(chir[i, 1]), float(chir[i, 2])))
        else:
            rows.append((m, 0.0, 0.0, 0.0, 0.0))
    left, right = side_lobe_peaks(state)
    meta = {"t": cfg.t, "p0": float(probs[-state.start]), "left_peak": left, "right_peak": right}
    emit(_render(cfg, ["m", "p", "p1", "p2", "p3"], rows, meta), cfg.output)
    if cfg.fmt == "csv":
        # Keep stdout a clean CSV when it carries the table.
        print(_summary(meta), file=sys.stderr if cfg.output in (None, "-") else sys.stdout)
    return EXIT_OK


def cmd_limit(cfg: RunConfig) -> int:
    coin = cfg.coin()
    init = parse_init(cfg.init_text, coin)
    ms = cfg.m_window or range(-10, 11)
    values = limit_profile(coin, init, ms)
    rows = [(m, float(v)) for m, v in zip(ms, values)]
    emit(_render(cfg, ["m", "limit_p"], rows), cfg.output)
    return EXIT_OK


def cmd_localize(cfg: RunConfig) -> int:
    coin = cfg.coin()
    init = parse_init(cfg.init_text, coin)
    v = is_localized(coin, init)
    header = ["localized", "limit_p0", "loc_sum", "sum_positive"]
    emit(_render(cfg, header, [(v.localized, v.limit_p0, v.total, v.sum_positive)]), cfg.output)
    return EXIT_OK


_VELOCITY_HEADER = ["theta", "vL1", "vR1", "vL2", "vR2", "k0_1", "k0_2"]


def _velocity_row(family: Family, theta: float):
    p = peak_velocities(family, theta)
    return (theta, p.vL1, p.vR1, p.vL2, p.vR2, p.k0_1, p.k0_2)


def cmd_velocity(cfg: RunConfig) -> int:
    if cfg.dispersion_nodes is not None:
        if cfg.dispersion_nodes < 1:
            raise ConfigError("--dispersion needs a positive node count")
        ks = quadrature_nodes(cfg.dispersion_nodes)
        om, _, _ = eigensystems(cfg.coin(), ks)
        rows = [(float(k), float(a), float(b), float(c)) for k, (a, b, c) in zip(ks, om)]
        emit(_render(cfg, ["k", "omega1", "omega2", "omega3"], rows), cfg.output)
        return EXIT_OK
    coin = cfg.coin()
    p = peak_velocities(coin.family, coin.theta)
    meta = {"peaks_at_t": cfg.t, "predicted_peaks": predicted_peak_positions(p, max(cfg.t, 1))}
    emit(_render(cfg, _VELOCITY_HEADER, [_velocity_row(coin.family, coin.theta)], meta), cfg.output)
    return EXIT_OK


def _sweep_limit_row(family: Family, theta: float, init_text: str):
    coin = coin_from_theta(family, theta)
    init = parse_init(init_text, coin)
    if coin.is_permutation:
        p0 = limit_measure_permutation(coin, init, 0)
        total = sum(limit_measure_permutation(coin, init, m) for m in (-1, 0, 1))
    else:
        p0 = float(limit_profile(coin, init, [0])[0])
        total = localization_sum(coin, init)
    return (theta, coin.x, coin.y, p0, total)


def theta_grid(n: int) -> list[float]:
    """n equispaced angles from -pi to pi inclusive (a single point is 0)."""
    if n == 1:
        return [0.0]
    return [-math.pi + 2.0 * math.pi * j / (n - 1) for j in range(n)]


def cmd_sweep(cfg: RunConfig) -> int:
    thetas = theta_grid(cfg.grid)
    if cfg.quantity == "limit_p0":
        if cfg.init_text.strip().lower() != "escaping":
            parse_init(cfg.init_text, coin_from_theta(cfg.family, 1.0))  # validate once up front
        header = ["theta", "x", "y", "limit_p0", "loc_sum"]
        task = lambda th: _sweep_limit_row(cfg.family, th, cfg.init_text)  # noqa: E731
    else:
        header = _VELOCITY_HEADER
        task = lambda th: _velocity_row(cfg.family, th)  # noqa: E731
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        rows = list(pool.map(task, thetas))  # map preserves theta order
    emit(_render(cfg, header, rows), cfg.output)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    results = checks.run_all(seed=cfg.seed)
    if cfg.fmt == "json":
        rows = [(r.name, r.passed, r.worst, r.tol) for r in results]
        emit(json_text(["property", "passed", "worst", "tol"], rows), cfg.output)
    else:
        emit("".join(r.line() + "\n" for r in results), cfg.output)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


HANDLERS = {
    "simulate": cmd_simulate,
    "limit": cmd_limit,
    "localize": cmd_localize,
    "velocity": cmd_velocity,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
}


# Options whose values may legitimately start with '-' (e.g. --theta -pi/2).
_SIGNED_VALUE_OPTS = ("--theta", "--m-window", "--x", "--y", "--init")


def _attach_signed_values(argv: list[str]) -> list[str]:
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _SIGNED_VALUE_OPTS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_attach_signed_values(argv))  # argparse itself exits with 2 on bad syntax
    try:
        cfg = make_config(args)
        return HANDLERS[cfg.command](cfg)
    except (ConfigError, QWalkError) as exc:
        print(f"qwalk: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
