"""Coincidence correlation between the signal and idler detectors.

Post-selection keeps only products of terms that came from the same pair
(same path tag); the cross-pair products are what coincidence counting
discards. The classical mode multiplies the two singles intensities instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np
from scipy import integrate

from . import kernels
from .analyzers import AnalyzerSettings, ProjectedField
from .ensemble import DEFAULT_SEED, RunSpec, run_ensemble
from .pairmodel import PairBatch, SourceConfig, TimeModel

Mode = Literal["post_selected", "classical"]


@dataclass(frozen=True)
class CoincidenceMode:
    mode: Mode = "post_selected"
    tau: float = 0.0
    time_model: TimeModel = "path_time"

    def __post_init__(self):
        if self.mode not in ("post_selected", "classical"):
            raise ValueError(f"unknown coincidence mode {self.mode!r}")
        if self.time_model not in ("path_time", "detector_time"):
            raise ValueError(f"unknown time model {self.time_model!r}")


POST_SELECTED = CoincidenceMode()
CLASSICAL = CoincidenceMode("classical")


@dataclass(frozen=True)
class RatePoint:
    xi: float
    theta: float
    rate: float
    stat_error: float = 0.0


def coincidence_amplitude(es: ProjectedField, ei: ProjectedField, mode: CoincidenceMode = POST_SELECTED):
    """Pair-selected product amplitude (complex) or, classically, I_s * I_i.

    The post-selected amplitude includes both prefactors, so its squared
    magnitude is the coincidence value for this sample.
    """
    if es.detector != "Ds" or ei.detector != "Di":
        raise ValueError("expected a signal (Ds) and an idler (Di) field")
    if es.sample != ei.sample:
        raise ValueError("signal and idler fields come from different pair samples")
    if mode.mode == "classical":
        bs, bi = es.bracket(), ei.bracket()
        return (es.scale ** 2 * abs(bs) ** 2) * (ei.scale ** 2 * abs(bi) ** 2)
    selected = sum(
        (a_s * a_i for tag_s, a_s in es.terms for tag_i, a_i in ei.terms if tag_s.path == tag_i.path),
        0j,
    )
    phase = es.phase + ei.phase
    return es.scale * ei.scale * complex(math.cos(phase), math.sin(phase)) * selected


def coincidence_value(es: ProjectedField, ei: ProjectedField, mode: CoincidenceMode = POST_SELECTED) -> float:
    if mode.mode == "classical":
        return coincidence_amplitude(es, ei, mode)
    # magnitude from the bracket alone so the global phase cannot leak in
    selected = sum(
        (a_s * a_i for tag_s, a_s in es.terms for tag_i, a_i in ei.terms if tag_s.path == tag_i.path),
        0j,
    )
    return (es.scale * ei.scale) ** 2 * (selected.real ** 2 + selected.imag ** 2)


def coincidence_rate_analytic(settings: AnalyzerSettings, i0: float = 1.0) -> float:
    if not i0 > 0:
        raise ValueError("i0 must be positive")
    return 0.25 * i0 * i0 * math.sin(settings.theta - settings.xi) ** 2


def classical_rate_analytic(settings: AnalyzerSettings, i0: float = 1.0) -> float:
    """Ensemble-averaged singles product for uniformly distributed delta_jk."""
    return 0.25 * i0 * i0 * (1.0 - 0.5 * math.sin(2 * settings.xi) * math.sin(2 * settings.theta))


def classical_rate_quadrature(settings: AnalyzerSettings, i0: float = 1.0) -> float:
    """Average of I_s * I_i over delta_jk in [0, 2pi) by adaptive quadrature."""
    a, b = math.sin(2 * settings.xi), math.sin(2 * settings.theta)

    def integrand(d):
        return 0.25 * i0 * i0 * (1 - a * math.sin(d)) * (1 + b * math.sin(d))

    value, _ = integrate.quad(integrand, 0.0, 2 * math.pi, epsabs=1e-13, epsrel=1e-13)
    return value / (2 * math.pi)


def dephased_rate_limit(settings: AnalyzerSettings, i0: float = 1.0) -> float:
    """Post-selected rate once the same-pair cross term has fully dephased."""
    sx, cx = math.sin(settings.xi), math.cos(settings.xi)
    st, ct = math.sin(settings.theta), math.cos(settings.theta)
    return 0.25 * i0 * i0 * (sx * sx * ct * ct + cx * cx * st * st)


def batch_times(batch: PairBatch, mode: CoincidenceMode):
    """Vectorized ``pairmodel.port_times``: (sa1, sa2, sb1, sb2)."""
    sa1 = batch.time_1
    sa2 = batch.time_2 if mode.time_model == "path_time" else batch.time_1
    return sa1, sa2, sa1 + mode.tau, sa2 + mode.tau


def coincidence_batch(
    config: SourceConfig, batch: PairBatch, settings: AnalyzerSettings, mode: CoincidenceMode = POST_SELECTED
) -> np.ndarray:
    sa1, sa2, sb1, sb2 = batch_times(batch, mode)
    return kernels.coincidence(
        batch.detuning_j, batch.detuning_k, sa1, sa2, sb1, sb2,
        settings.xi, settings.theta, config.amplitude_e0, config.path2_phase,
        mode.mode == "post_selected",
    )


def coincidence_grid_batch(
    config: SourceConfig,
    batch: PairBatch,
    grid: Sequence[AnalyzerSettings],
    mode: CoincidenceMode = POST_SELECTED,
) -> np.ndarray:
    """Per-trial values for many settings on one batch, shape (n, len(grid))."""
    sa1, sa2, sb1, sb2 = batch_times(batch, mode)
    return kernels.coincidence_grid(
        batch.detuning_j, batch.detuning_k, sa1, sa2, sb1, sb2,
        [s.xi for s in grid], [s.theta for s in grid],
        config.amplitude_e0, config.path2_phase, mode.mode == "post_selected",
    )


def coincidence_rate_mc(
    settings: AnalyzerSettings,
    config: SourceConfig,
    mode: CoincidenceMode = POST_SELECTED,
    n_trials: int = 10_000,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
) -> RatePoint:
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    acc = run_ensemble(
        RunSpec(n_trials, seed), config, lambda b: coincidence_batch(config, b, settings, mode), workers
    )
    return RatePoint(settings.xi, settings.theta, float(acc.mean), float(acc.stderr))


def coincidence_grid_mc(
    grid: Sequence[AnalyzerSettings],
    config: SourceConfig,
    mode: CoincidenceMode = POST_SELECTED,
    n_trials: int = 10_000,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
) -> list[RatePoint]:
    """Like ``coincidence_rate_mc`` for many settings sharing one sample stream."""
    grid = list(grid)
    acc = run_ensemble(
        RunSpec(n_trials, seed), config, lambda b: coincidence_grid_batch(config, b, grid, mode), workers
    )
    return [
        RatePoint(s.xi, s.theta, float(m), float(e))
        for s, m, e in zip(grid, np.atleast_1d(acc.mean), np.atleast_1d(acc.stderr))
    ]


def decoherence_scan(
    settings: AnalyzerSettings,
    config: SourceConfig,
    tau_grid: Sequence[float],
    n_trials: int = 100_000,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
) -> list[RatePoint]:
    """Post-selected rate versus idler delay, detector-time model.

    For i.i.d. Gaussian detunings of width sigma the same-pair cross term is
    scaled by exp(-(sigma*tau)^2).
    """
    if config.spectrum_kind != "gaussian" or not config.bandwidth_sigma > 0:
        raise ValueError("decoherence scan needs a Gaussian spectrum with bandwidth_sigma > 0")
    taus = list(tau_grid)
    modes = [CoincidenceMode("post_selected", float(t), "detector_time") for t in taus]

    def per_trial(batch):
        return np.stack([coincidence_batch(config, batch, settings, m) for m in modes], axis=1)

    acc = run_ensemble(RunSpec(n_trials, seed), config, per_trial, workers)
    return [
        RatePoint(settings.xi, settings.theta, float(m), float(e))
        for m, e in zip(np.atleast_1d(acc.mean), np.atleast_1d(acc.stderr))
    ]


def cross_term_contrast(point: RatePoint, i0: float = 1.0) -> tuple[float, float]:
    """Recover the dephasing factor of the same-pair cross term from a rate.

    The post-selected rate is ``limit - (i0^2/4) * w * c`` with
    ``w = sin(2xi) sin(2theta) / 2`` and ``c`` the contrast (1 at tau=0).
    """
    settings = AnalyzerSettings(point.xi, point.theta)
    w = 0.125 * i0 * i0 * math.sin(2 * point.xi) * math.sin(2 * point.theta)
    if abs(w) < 1e-12:
        raise ValueError("cross term vanishes at these analyzer settings; contrast is undefined")
    limit = dephased_rate_limit(settings, i0)
    return (limit - point.rate) / w, point.stat_error / abs(w)


def fringe_visibility(rates: Sequence[float]) -> float:
    hi, lo = max(rates), min(rates)
    return (hi - lo) / (hi + lo) if hi + lo > 0 else 0.0
