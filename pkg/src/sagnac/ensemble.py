"""Deterministic Monte Carlo harness.

Trials are split into fixed-size chunks. Chunk ``c`` draws from its own
generator seeded by ``SeedSequence(master_seed, spawn_key=(c,))``, so the
sample stream depends only on the RunSpec, never on how many workers process
it. Chunk accumulators are merged in chunk order, which makes the reported
mean bit-identical across worker counts.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from . import kernels
from .pairmodel import PairBatch, PairSample, SourceConfig, sample_batch

DEFAULT_SEED = 42
DEFAULT_CHUNK = 4096


class EmptyEnsembleError(ValueError):
    pass


@dataclass(frozen=True)
class RunSpec:
    n_trials: int
    master_seed: int = DEFAULT_SEED
    chunk_size: int = DEFAULT_CHUNK

    def __post_init__(self):
        if self.n_trials < 0:
            raise ValueError("n_trials must be >= 0")
        if self.chunk_size < 1:
            raise ValueError("chunk_size must be >= 1")
        if not 0 <= self.master_seed < 2 ** 64:
            raise ValueError("master_seed must fit in an unsigned 64-bit integer")

    def chunks(self) -> Iterator[tuple[int, int]]:
        """Yield (chunk_index, chunk_length)."""
        full, rest = divmod(self.n_trials, self.chunk_size)
        for c in range(full):
            yield c, self.chunk_size
        if rest:
            yield full, rest


def chunk_rng(master_seed: int, chunk_index: int) -> np.random.Generator:
    seq = np.random.SeedSequence(master_seed, spawn_key=(chunk_index,))
    return np.random.Generator(np.random.PCG64(seq))


@dataclass(frozen=True)
class Accumulator:
    """Streaming count/mean/M2. ``mean`` and ``m2`` may be arrays (elementwise)."""

    count: int = 0
    mean: float | np.ndarray = 0.0
    m2: float | np.ndarray = 0.0

    @classmethod
    def from_values(cls, values: np.ndarray) -> "Accumulator":
        values = np.asarray(values, dtype=np.float64)
        if values.ndim == 1:
            return cls(*kernels.moments(values))
        n = values.shape[0]
        if n == 0:
            return cls()
        mean = values.mean(axis=0)
        d = values - mean
        return cls(n, mean, np.einsum("i...,i...->...", d, d))

    def merge(self, other: "Accumulator") -> "Accumulator":
        # Chan et al. pairwise update
        if other.count == 0:
            return self
        if self.count == 0:
            return other
        n = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * (other.count / n)
        m2 = self.m2 + other.m2 + delta * delta * (self.count * other.count / n)
        return Accumulator(n, mean, m2)

    @property
    def variance(self):
        if self.count < 2:
            return self.m2 * 0.0
        return self.m2 / (self.count - 1)

    @property
    def stderr(self):
        return np.sqrt(self.variance / max(self.count, 1))


def iter_batches(spec: RunSpec, config: SourceConfig) -> Iterator[PairBatch]:
    for c, size in spec.chunks():
        yield sample_batch(config, chunk_rng(spec.master_seed, c), size)


def per_sample(fn: Callable[[PairSample], float]) -> Callable[[PairBatch], np.ndarray]:
    """Lift a scalar per-trial function to the batch form run_ensemble expects."""

    def batched(batch: PairBatch) -> np.ndarray:
        return np.fromiter((fn(s) for s in batch), dtype=np.float64, count=len(batch))

    return batched


def run_ensemble(
    spec: RunSpec,
    config: SourceConfig,
    per_trial_fn: Callable[[PairBatch], np.ndarray],
    workers: int = 1,
) -> Accumulator:
    """Average ``per_trial_fn`` over ``spec.n_trials`` sampled pairs.

    ``per_trial_fn`` maps a PairBatch to per-trial values, shape ``(n,)`` or
    ``(n, ...)`` for several observables sharing the same samples.
    """
    if spec.n_trials == 0:
        raise EmptyEnsembleError("ensemble needs at least one trial")

    def work(chunk: tuple[int, int]) -> Accumulator:
        c, size = chunk
        batch = sample_batch(config, chunk_rng(spec.master_seed, c), size)
        return Accumulator.from_values(per_trial_fn(batch))

    chunks = list(spec.chunks())
    if workers <= 1:
        parts = list(map(work, chunks))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, chunks))
    total = Accumulator()
    for part in parts:
        total = total.merge(part)
    return total
