"""Local polarizers and single-detector intensities.

Angles are measured from H: a polarizer at ``alpha`` passes the H component
scaled by cos(alpha) and the V component scaled by sin(alpha). Raw angles go
into the trig; reduction mod pi is for display only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from . import kernels
from .ensemble import Accumulator, RunSpec, run_ensemble
from .pairmodel import (
    BasisTag,
    OutputField,
    PairBatch,
    PairSample,
    SourceConfig,
    TimeModel,
    build_output_fields,
)

Detector = Literal["Ds", "Di"]


@dataclass(frozen=True)
class AnalyzerSettings:
    xi: float
    theta: float

    @classmethod
    def from_degrees(cls, xi_deg: float, theta_deg: float) -> "AnalyzerSettings":
        return cls(math.radians(xi_deg), math.radians(theta_deg))

    def canonical(self) -> "AnalyzerSettings":
        return AnalyzerSettings(self.xi % math.pi, self.theta % math.pi)

    def degrees(self) -> tuple[float, float]:
        c = self.canonical()
        return math.degrees(c.xi), math.degrees(c.theta)


@dataclass(frozen=True)
class ProjectedField:
    detector: Detector
    terms: tuple[tuple[BasisTag, complex], ...]
    scale: float
    phase: float
    sample: PairSample = field(compare=False)

    @property
    def amplitudes(self) -> tuple[complex, ...]:
        pre = self.scale * complex(math.cos(self.phase), math.sin(self.phase))
        return tuple(pre * amp for _, amp in self.terms)

    def bracket(self) -> complex:
        return sum((amp for _, amp in self.terms), 0j)


def _project(field_: OutputField, angle: float, detector: Detector) -> ProjectedField:
    c, s = math.cos(angle), math.sin(angle)
    terms = tuple(
        (tag, amp * (c if tag.polarization == "H" else s)) for tag, amp in field_.terms
    )
    return ProjectedField(detector, terms, field_.scale, field_.phase, field_.sample)


def project_signal(field_a: OutputField, settings: AnalyzerSettings) -> ProjectedField:
    if field_a.port != "A":
        raise ValueError(f"signal analyzer expects the port-A field, got port {field_a.port}")
    return _project(field_a, settings.xi, "Ds")


def project_idler(field_b: OutputField, settings: AnalyzerSettings) -> ProjectedField:
    if field_b.port != "B":
        raise ValueError(f"idler analyzer expects the port-B field, got port {field_b.port}")
    return _project(field_b, settings.theta, "Di")


def singles_intensity(field_: ProjectedField, sample: PairSample | None = None) -> float:
    """|E|^2 at the detector, summed coherently over both paths."""
    if sample is not None and sample != field_.sample:
        raise ValueError("projected field was built from a different pair sample")
    b = field_.bracket()
    return field_.scale ** 2 * (b.real * b.real + b.imag * b.imag)


def singles_closed_form(angle: float, delta: float, i0: float, detector: Detector) -> float:
    sign = -1.0 if detector == "Ds" else 1.0
    return 0.5 * i0 * (1.0 + sign * math.sin(2.0 * angle) * math.sin(delta))


def project_sample(
    config: SourceConfig,
    sample: PairSample,
    settings: AnalyzerSettings,
    tau: float = 0.0,
    time_model: TimeModel = "path_time",
) -> tuple[ProjectedField, ProjectedField]:
    fa, fb = build_output_fields(config, sample, tau, time_model)
    return project_signal(fa, settings), project_idler(fb, settings)


def singles_batch(config: SourceConfig, batch: PairBatch, angle: float, detector: Detector) -> np.ndarray:
    fn = kernels.signal_intensity if detector == "Ds" else kernels.idler_intensity
    return fn(
        batch.detuning_j, batch.detuning_k, batch.time_1, batch.time_2,
        angle, config.amplitude_e0, config.path2_phase,
    )


def singles_mc(
    config: SourceConfig,
    angle: float,
    detector: Detector,
    n_trials: int,
    seed: int = 42,
    workers: int = 1,
) -> Accumulator:
    spec = RunSpec(n_trials, seed)
    return run_ensemble(spec, config, lambda b: singles_batch(config, b, angle, detector), workers)
