import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sagnac.ensemble import (
    Accumulator,
    EmptyEnsembleError,
    RunSpec,
    iter_batches,
    per_sample,
    run_ensemble,
)
from sagnac.pairmodel import SourceConfig, delta_jk

CFG = SourceConfig()


def sin_delta(batch):
    return np.sin(batch.delta_jk())


def test_constant_function():
    acc = run_ensemble(RunSpec(5000, chunk_size=512), CFG, lambda b: np.ones(len(b)))
    assert acc.count == 5000 and acc.mean == 1.0 and acc.variance == 0.0


def test_empty_ensemble_rejected():
    with pytest.raises(EmptyEnsembleError):
        run_ensemble(RunSpec(0), CFG, sin_delta)


def test_runspec_validation():
    with pytest.raises(ValueError):
        RunSpec(10, chunk_size=0)
    with pytest.raises(ValueError):
        RunSpec(10, master_seed=-1)
    assert list(RunSpec(10, chunk_size=4).chunks()) == [(0, 4), (1, 4), (2, 2)]


def test_sin_delta_averages_to_zero():
    n = 1_000_000
    acc = run_ensemble(RunSpec(n), CFG, sin_delta)
    assert abs(acc.mean) < 5 / math.sqrt(2 * n)


def test_standard_error_honesty():
    n = 100_000
    acc = run_ensemble(RunSpec(n, master_seed=3), CFG, sin_delta)
    assert acc.stderr == pytest.approx(math.sqrt(0.5 / n), rel=0.2)


@pytest.mark.parametrize("workers", [2, 8])
def test_worker_count_does_not_change_mean(workers):
    spec = RunSpec(100_000, master_seed=5, chunk_size=1000)
    one = run_ensemble(spec, CFG, sin_delta, workers=1)
    many = run_ensemble(spec, CFG, sin_delta, workers=workers)
    assert many.mean == one.mean and many.m2 == one.m2


def test_sample_stream_is_reproducible():
    spec = RunSpec(10_000, master_seed=17, chunk_size=3000)
    a = list(iter_batches(spec, CFG))
    b = list(iter_batches(spec, CFG))
    assert [len(x) for x in a] == [3000, 3000, 3000, 1000]
    for x, y in zip(a, b):
        np.testing.assert_array_equal(x.time_1, y.time_1)
        np.testing.assert_array_equal(x.detuning_k, y.detuning_k)


def test_different_seeds_give_different_streams():
    a = next(iter_batches(RunSpec(100, master_seed=1), CFG))
    b = next(iter_batches(RunSpec(100, master_seed=2), CFG))
    assert not np.array_equal(a.detuning_j, b.detuning_j)


def test_per_sample_adapter_matches_batch():
    spec = RunSpec(2000, chunk_size=700)
    scalar = run_ensemble(spec, CFG, per_sample(lambda s: math.sin(delta_jk(s))))
    vector = run_ensemble(spec, CFG, sin_delta)
    assert scalar.mean == pytest.approx(vector.mean, abs=1e-12)


def test_vector_observables():
    acc = run_ensemble(RunSpec(1000), CFG, lambda b: np.stack([np.ones(len(b)), 2 * np.ones(len(b))], axis=1))
    np.testing.assert_array_equal(acc.mean, [1.0, 2.0])
    np.testing.assert_array_equal(acc.stderr, [0.0, 0.0])


values = st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=1, max_size=50)


@given(values, values, values)
def test_merge_associative_commutative(a, b, c):
    A, B, C = (Accumulator.from_values(np.array(v)) for v in (a, b, c))
    left = A.merge(B).merge(C)
    right = A.merge(B.merge(C))
    swapped = C.merge(A).merge(B)
    whole = np.array(a + b + c)
    for acc in (left, right, swapped):
        assert acc.count == len(whole)
        assert acc.mean == pytest.approx(whole.mean(), rel=1e-10, abs=1e-9)
        assert acc.m2 == pytest.approx(((whole - whole.mean()) ** 2).sum(), rel=1e-10, abs=1e-7)


def test_variance_definition():
    acc = Accumulator.from_values(np.array([1.0, 2.0, 4.0]))
    assert acc.variance == pytest.approx(np.var([1, 2, 4], ddof=1))
    assert Accumulator.from_values(np.array([3.0])).variance == 0.0
