"""Polarization correlation E and the CHSH parameter S.

A rate function maps ``(xi, theta)`` in radians to a coincidence rate, either
a bare float (exact) or a RatePoint carrying a standard error. Errors are
propagated to first order assuming independent rate estimates.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .analyzers import AnalyzerSettings
from .coincidence import (
    CoincidenceMode,
    RatePoint,
    classical_rate_analytic,
    coincidence_rate_analytic,
    coincidence_rate_mc,
)
from .ensemble import DEFAULT_SEED
from .pairmodel import SourceConfig

RateFn = Callable[[float, float], Union[float, RatePoint]]

HALF_PI = math.pi / 2


class DegenerateCorrelationError(ValueError):
    """All four rates entering E vanished."""


@dataclass(frozen=True)
class ChshAngles:
    a: float
    a_prime: float
    b: float
    b_prime: float

    @classmethod
    def from_degrees(cls, a, a_prime, b, b_prime) -> "ChshAngles":
        return cls(*(math.radians(x) for x in (a, a_prime, b, b_prime)))


CANONICAL_ANGLES = ChshAngles(0.0, math.pi / 4, math.pi / 8, 3 * math.pi / 8)


@dataclass(frozen=True)
class ChshResult:
    e_values: tuple[float, float, float, float]
    s_value: float
    stat_error: float = 0.0
    e_errors: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)


def _rate(rate_fn: RateFn, xi: float, theta: float) -> tuple[float, float]:
    r = rate_fn(xi, theta)
    if isinstance(r, RatePoint):
        return r.rate, r.stat_error
    return float(r), 0.0


def correlation_with_error(settings: AnalyzerSettings, rate_fn: RateFn) -> tuple[float, float]:
    xi, th = settings.xi, settings.theta
    r_pp, e_pp = _rate(rate_fn, xi, th)
    r_oo, e_oo = _rate(rate_fn, xi + HALF_PI, th + HALF_PI)
    r_op, e_op = _rate(rate_fn, xi + HALF_PI, th)
    r_po, e_po = _rate(rate_fn, xi, th + HALF_PI)
    same = r_pp + r_oo
    cross = r_op + r_po
    total = same + cross
    if total == 0:
        raise DegenerateCorrelationError(f"all four coincidence rates are zero at {settings}")
    e = (same - cross) / total
    # dE/dR is 2*cross/total^2 for the same-basis rates, -2*same/total^2 for the others
    g_same = 2 * cross / total ** 2
    g_cross = 2 * same / total ** 2
    err = math.sqrt(g_same ** 2 * (e_pp ** 2 + e_oo ** 2) + g_cross ** 2 * (e_op ** 2 + e_po ** 2))
    return e, err


def correlation_e(settings: AnalyzerSettings, rate_fn: RateFn) -> float:
    return correlation_with_error(settings, rate_fn)[0]


def chsh_s(angles: ChshAngles, rate_fn: RateFn) -> ChshResult:
    """S = |E(a,b) - E(a,b')| + |E(a',b) + E(a',b')|."""
    pairs = [
        (angles.a, angles.b),
        (angles.a, angles.b_prime),
        (angles.a_prime, angles.b),
        (angles.a_prime, angles.b_prime),
    ]
    results = [correlation_with_error(AnalyzerSettings(x, t), rate_fn) for x, t in pairs]
    e = tuple(r[0] for r in results)
    errs = tuple(r[1] for r in results)
    s = abs(e[0] - e[1]) + abs(e[2] + e[3])
    return ChshResult(e, s, math.sqrt(sum(x * x for x in errs)), errs)


def bell_scan(rate_fn: RateFn, grid_steps: int) -> list[tuple[float, float]]:
    """E against theta - xi over [0, pi), with xi held at 0."""
    if grid_steps < 2:
        raise ValueError("grid_steps must be >= 2")
    deltas = np.arange(grid_steps) * (math.pi / grid_steps)
    return [(float(d), correlation_e(AnalyzerSettings(0.0, float(d)), rate_fn)) for d in deltas]


def analytic_rate_fn(i0: float = 1.0) -> RateFn:
    return lambda xi, theta: coincidence_rate_analytic(AnalyzerSettings(xi, theta), i0)


def classical_rate_fn(i0: float = 1.0) -> RateFn:
    return lambda xi, theta: classical_rate_analytic(AnalyzerSettings(xi, theta), i0)


def mc_rate_fn(
    config: SourceConfig,
    mode: CoincidenceMode,
    n_trials: int,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
) -> RateFn:
    """Monte Carlo rates; every call gets a fresh derived seed.

    Seeds come from a call counter, so the same sequence of calls reproduces
    the same rates and separate calls are statistically independent.
    """
    counter = itertools.count()

    def rate(xi: float, theta: float) -> RatePoint:
        call_seed = int(np.random.SeedSequence(seed, spawn_key=(1 << 20, next(counter))).generate_state(2, np.uint64)[0])
        return coincidence_rate_mc(AnalyzerSettings(xi, theta), config, mode, n_trials, call_seed, workers)

    return rate
