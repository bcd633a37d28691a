"""Photon-pair state of the noninterfering Sagnac source and its PBS output fields.

Pairs leave the loop either backward (path 1) or forward (path 2). The signal
and idler of a pair are oppositely detuned about the degenerate frequency, so
only the detuning is stored; the sign is applied by port convention. Path 2
passes a half-wave plate, which swaps H and V relative to path 1.

Detunings are angular frequencies (rad/s). Convert Hz with ``hz_to_rad_s``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields, replace
from os import PathLike
from typing import Iterator, Literal

import numpy as np

Spectrum = Literal["gaussian", "uniform"]
PhaseSampling = Literal["uniform", "physical"]
Port = Literal["A", "B"]
TimeModel = Literal["path_time", "detector_time"]

DEFAULT_BANDWIDTH = 2.0 * math.pi * 1.0e9

_JSON_KEYS = {
    "amplitude_e0": "amplitude_e0",
    "phase_phi_rad": "phase_phi",
    "global_phase_rad": "global_phase",
    "bandwidth_sigma_rad_s": "bandwidth_sigma",
    "spectrum": "spectrum_kind",
    "phase_sampling": "phase_sampling",
    "time_window_s": "time_window",
    "path2_phase_rad": "path2_phase",
}


def hz_to_rad_s(hz: float) -> float:
    return 2.0 * math.pi * hz


@dataclass(frozen=True)
class SourceConfig:
    """Source parameters.

    ``phase_phi`` and ``global_phase`` only ever appear summed as the traveling
    phase ``phase_prime``; they are kept apart so invariance under either can
    be exercised.

    ``path2_phase`` is the fixed quadrature carried by the path-2 terms
    (+ on the signal, - on the idler). With the default pi/2 the single-detector
    intensities follow ``(I0/2)(1 -/+ sin(2 angle) sin(delta_jk))``; with 0 the
    field is the bare projection and the sine becomes a cosine. Coincidence
    products do not depend on it.

    ``phase_sampling="uniform"`` draws time labels so that ``delta_jk`` is
    uniform on [0, 2pi) (requires a nonzero detuning); ``"physical"`` draws both
    time labels independently on [0, time_window).
    """

    amplitude_e0: float = 1.0
    phase_phi: float = 0.0
    global_phase: float = 0.0
    bandwidth_sigma: float = DEFAULT_BANDWIDTH
    spectrum_kind: Spectrum = "gaussian"
    phase_sampling: PhaseSampling = "uniform"
    time_window: float = 1.0e-6
    path2_phase: float = math.pi / 2

    def __post_init__(self):
        if not self.amplitude_e0 > 0:
            raise ValueError(f"amplitude_e0 must be positive, got {self.amplitude_e0}")
        if not self.bandwidth_sigma >= 0:
            raise ValueError(f"bandwidth_sigma must be >= 0, got {self.bandwidth_sigma}")
        if self.spectrum_kind not in ("gaussian", "uniform"):
            raise ValueError(f"unknown spectrum {self.spectrum_kind!r}")
        if self.phase_sampling not in ("uniform", "physical"):
            raise ValueError(f"unknown phase sampling {self.phase_sampling!r}")
        if not self.time_window > 0:
            raise ValueError("time_window must be positive")

    @property
    def phase_prime(self) -> float:
        return self.phase_phi + self.global_phase

    @property
    def i0(self) -> float:
        return self.amplitude_e0 ** 2

    def with_(self, **changes) -> "SourceConfig":
        return replace(self, **changes)

    @classmethod
    def from_dict(cls, doc: dict) -> "SourceConfig":
        kwargs = {}
        for key, value in doc.items():
            if key in _JSON_KEYS:
                kwargs[_JSON_KEYS[key]] = value
        return cls(**kwargs)

    def to_dict(self) -> dict:
        inverse = {v: k for k, v in _JSON_KEYS.items()}
        return {inverse[f.name]: getattr(self, f.name) for f in fields(self)}


def load_config(path: str | PathLike) -> SourceConfig:
    """Read a SourceConfig from a JSON file; missing keys take defaults."""
    with open(path) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise ValueError("config document must be a JSON object")
    return SourceConfig.from_dict(doc)


@dataclass(frozen=True)
class PairSample:
    detuning_j: float
    detuning_k: float
    time_1: float
    time_2: float


def delta_jk(sample: PairSample) -> float:
    """Detuning-time phase that randomizes the single-detector fringes."""
    return sample.detuning_j * sample.time_1 - sample.detuning_k * sample.time_2


@dataclass(frozen=True)
class PairBatch:
    """Struct-of-arrays view of many PairSamples (one MC chunk)."""

    detuning_j: np.ndarray
    detuning_k: np.ndarray
    time_1: np.ndarray
    time_2: np.ndarray

    def __len__(self):
        return len(self.detuning_j)

    def __getitem__(self, i: int) -> PairSample:
        return PairSample(
            float(self.detuning_j[i]),
            float(self.detuning_k[i]),
            float(self.time_1[i]),
            float(self.time_2[i]),
        )

    def __iter__(self) -> Iterator[PairSample]:
        for i in range(len(self)):
            yield self[i]

    def delta_jk(self) -> np.ndarray:
        return self.detuning_j * self.time_1 - self.detuning_k * self.time_2


def _draw_detunings(config: SourceConfig, rng: np.random.Generator, n: int) -> np.ndarray:
    sigma = config.bandwidth_sigma
    if sigma == 0:
        return np.zeros((2, n))
    if config.spectrum_kind == "gaussian":
        return rng.normal(0.0, sigma, size=(2, n))
    half_width = math.sqrt(3.0) * sigma
    return rng.uniform(-half_width, half_width, size=(2, n))


def sample_batch(config: SourceConfig, rng: np.random.Generator, n: int) -> PairBatch:
    dj, dk = _draw_detunings(config, rng, n)
    window = config.time_window
    if config.phase_sampling == "physical":
        t1, t2 = rng.uniform(0.0, window, size=(2, n))
        return PairBatch(dj, dk, t1, t2)

    target = rng.uniform(0.0, 2.0 * math.pi, size=n)
    free = rng.uniform(0.0, window, size=n)
    t1, t2 = solve_time_labels(dj, dk, target, free)
    return PairBatch(dj, dk, t1, t2)


def solve_time_labels(dj, dk, target, free):
    """Time labels with ``dj*t1 - dk*t2 == target``.

    The label paired with a nonzero detuning is solved for and the other takes
    ``free``. Where both detunings vanish no phase can be produced and both
    labels are ``free``.
    """
    dj, dk, target, free = (np.asarray(x, dtype=np.float64) for x in (dj, dk, target, free))
    use_j = dj != 0
    use_k = ~use_j & (dk != 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        t1 = np.where(use_j, (target + dk * free) / dj, free)
        t2 = np.where(use_k, -target / dk, free)
    return t1, t2


def sample_pair(config: SourceConfig, rng: np.random.Generator) -> PairSample:
    return sample_batch(config, rng, 1)[0]


@dataclass(frozen=True)
class BasisTag:
    path: Literal[1, 2]
    polarization: Literal["H", "V"]
    detuning_sign: Literal[1, -1]

    def __str__(self):
        return f"{self.polarization}{self.path}{'+' if self.detuning_sign > 0 else '-'}"


@dataclass(frozen=True)
class OutputField:
    """One PBS output port.

    The field is ``scale * exp(i*phase) * sum(amp for _, amp in terms)``; the
    common prefactor is kept in polar form so that intensities never see the
    global phase.
    """

    port: Port
    terms: tuple[tuple[BasisTag, complex], ...]
    scale: float
    phase: float
    sample: PairSample = field(compare=False)

    @property
    def amplitudes(self) -> tuple[complex, ...]:
        pre = self.scale * complex(math.cos(self.phase), math.sin(self.phase))
        return tuple(pre * amp for _, amp in self.terms)

    def intensity(self) -> float:
        return self.scale ** 2 * sum(abs(amp) ** 2 for _, amp in self.terms)


def _phasor(angle: float) -> complex:
    return complex(math.cos(angle), math.sin(angle))


def port_times(
    sample: PairSample, tau: float = 0.0, time_model: TimeModel = "path_time"
) -> tuple[tuple[float, float], tuple[float, float]]:
    """Time labels (path 1, path 2) used at port A and at port B.

    ``path_time`` keeps each path's own label; ``detector_time`` evaluates both
    paths at the signal detection time. The idler side is delayed by ``tau``.
    """
    if time_model == "path_time":
        a = (sample.time_1, sample.time_2)
    elif time_model == "detector_time":
        a = (sample.time_1, sample.time_1)
    else:
        raise ValueError(f"unknown time model {time_model!r}")
    return a, (a[0] + tau, a[1] + tau)


def build_output_fields(
    config: SourceConfig,
    sample: PairSample,
    tau: float = 0.0,
    time_model: TimeModel = "path_time",
) -> tuple[OutputField, OutputField]:
    (ta1, ta2), (tb1, tb2) = port_times(sample, tau, time_model)
    dj, dk = sample.detuning_j, sample.detuning_k
    p2 = config.path2_phase
    scale = config.amplitude_e0 / math.sqrt(2.0)

    field_a = OutputField(
        port="A",
        terms=(
            (BasisTag(1, "V", 1), -_phasor(dj * ta1)),
            (BasisTag(2, "H", 1), _phasor(dk * ta2 + p2)),
        ),
        scale=scale,
        phase=config.phase_prime,
        sample=sample,
    )
    field_b = OutputField(
        port="B",
        terms=(
            (BasisTag(1, "H", -1), _phasor(-dj * tb1)),
            (BasisTag(2, "V", -1), _phasor(-(dk * tb2 + p2))),
        ),
        scale=scale,
        phase=config.phase_prime + math.pi / 2,
        sample=sample,
    )
    return field_a, field_b
