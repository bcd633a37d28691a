import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sagnac.analyzers import (
    AnalyzerSettings,
    project_idler,
    project_sample,
    project_signal,
    singles_batch,
    singles_closed_form,
    singles_intensity,
    singles_mc,
)
from sagnac.pairmodel import PairBatch, PairSample, SourceConfig, build_output_fields, delta_jk, sample_batch

LITERAL = SourceConfig(path2_phase=0.0)
ZERO = PairSample(0, 0, 0, 0)
angle = st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False)


def sample_with_delta(delta):
    # dj*t1 - dk*t2 = delta with dk = 0
    return PairSample(1.0, 0.0, delta, 0.0)


def test_signal_projection_zeros():
    fa, _ = build_output_fields(LITERAL, ZERO)
    assert project_signal(fa, AnalyzerSettings(0, 0)).amplitudes[0] == 0
    assert abs(project_signal(fa, AnalyzerSettings(math.pi / 2, 0)).amplitudes[1]) < 1e-16


def test_idler_projection_zeros():
    _, fb = build_output_fields(LITERAL, ZERO)
    assert project_idler(fb, AnalyzerSettings(0, 0)).amplitudes[1] == 0
    assert abs(project_idler(fb, AnalyzerSettings(0, math.pi / 2)).amplitudes[0]) < 1e-16


def test_projection_at_45_degrees_literal():
    fa, fb = build_output_fields(LITERAL, ZERO)
    s = AnalyzerSettings(math.pi / 4, math.pi / 4)
    np.testing.assert_allclose(project_signal(fa, s).amplitudes, [-0.5, 0.5], atol=1e-15)
    np.testing.assert_allclose(project_idler(fb, s).amplitudes, [0.5j, 0.5j], atol=1e-15)


def test_projection_keeps_origin_tags():
    es, ei = project_sample(SourceConfig(), PairSample(1, 2, 3, 4), AnalyzerSettings(0.3, 0.7))
    assert [t.path for t, _ in es.terms] == [1, 2]
    assert [t.path for t, _ in ei.terms] == [1, 2]
    assert es.detector == "Ds" and ei.detector == "Di"


def test_wrong_port_rejected():
    fa, fb = build_output_fields(SourceConfig(), ZERO)
    with pytest.raises(ValueError):
        project_signal(fb, AnalyzerSettings(0, 0))
    with pytest.raises(ValueError):
        project_idler(fa, AnalyzerSettings(0, 0))


def test_mismatched_sample_rejected():
    es, _ = project_sample(SourceConfig(), ZERO, AnalyzerSettings(0, 0))
    with pytest.raises(ValueError):
        singles_intensity(es, PairSample(1, 0, 0, 0))


def test_signal_vanishes_at_45_and_quarter_wave():
    es, _ = project_sample(SourceConfig(), sample_with_delta(math.pi / 2), AnalyzerSettings(math.pi / 4, 0))
    assert singles_intensity(es) == pytest.approx(0.0, abs=1e-15)


def test_idler_full_at_45_and_quarter_wave():
    _, ei = project_sample(SourceConfig(), sample_with_delta(math.pi / 2), AnalyzerSettings(0, math.pi / 4))
    assert singles_intensity(ei) == pytest.approx(1.0, abs=1e-15)


def test_literal_projection_follows_cosine_law():
    # without the path-2 quadrature the fringe is in cos(delta_jk)
    d = 0.9
    es, _ = project_sample(LITERAL, sample_with_delta(d), AnalyzerSettings(0.3, 0))
    assert singles_intensity(es) == pytest.approx(0.5 * (1 - math.sin(0.6) * math.cos(d)), abs=1e-14)


def test_closed_form_agreement_random():
    rng = np.random.default_rng(123)
    cfg = SourceConfig(amplitude_e0=1.7)
    worst = 0.0
    for _ in range(10_000):
        xi, th = rng.uniform(-math.pi, math.pi, 2)
        s = PairSample(*rng.normal(0, 1e3, 2), *rng.uniform(0, 1, 2))
        es, ei = project_sample(cfg, s, AnalyzerSettings(xi, th))
        d = delta_jk(s)
        worst = max(
            worst,
            abs(singles_intensity(es, s) - singles_closed_form(xi, d, cfg.i0, "Ds")),
            abs(singles_intensity(ei, s) - singles_closed_form(th, d, cfg.i0, "Di")),
        )
    assert worst < 1e-10


@given(angle, angle, st.floats(-1e3, 1e3), st.floats(-1e3, 1e3), st.floats(0, 1), st.floats(0, 1))
def test_polarizer_complement(xi, th, dj, dk, t1, t2):
    s = PairSample(dj, dk, t1, t2)
    cfg = SourceConfig()
    a_s, a_i = project_sample(cfg, s, AnalyzerSettings(xi, th))
    b_s, b_i = project_sample(cfg, s, AnalyzerSettings(xi + math.pi / 2, th + math.pi / 2))
    assert singles_intensity(a_s) + singles_intensity(b_s) == pytest.approx(cfg.i0, abs=1e-10)
    assert singles_intensity(a_i) + singles_intensity(b_i) == pytest.approx(cfg.i0, abs=1e-10)


@given(angle, st.floats(-1e3, 1e3), st.floats(0, 1))
def test_polarizer_never_amplifies(xi, dj, t1):
    es, ei = project_sample(SourceConfig(), PairSample(dj, -dj, t1, 0.3), AnalyzerSettings(xi, xi))
    for f in (es, ei):
        assert sum(abs(a) ** 2 for a in f.amplitudes) <= 0.5 + 1e-12


@given(angle, angle, st.floats(-10, 10), st.floats(-10, 10))
def test_singles_bit_identical_under_phase(xi, th, phi, glob):
    s = PairSample(3.0, -2.0, 0.4, 0.9)
    a = project_sample(SourceConfig(), s, AnalyzerSettings(xi, th))
    b = project_sample(SourceConfig(phase_phi=phi, global_phase=glob), s, AnalyzerSettings(xi, th))
    for fa, fb in zip(a, b):
        assert singles_intensity(fa) == singles_intensity(fb)


def test_canonical_angles():
    s = AnalyzerSettings(math.pi + 0.1, -0.2).canonical()
    assert s.xi == pytest.approx(0.1) and s.theta == pytest.approx(math.pi - 0.2)
    assert AnalyzerSettings.from_degrees(30, 60).degrees() == pytest.approx((30, 60))


def test_batch_matches_object_path(backend):
    cfg = SourceConfig(phase_sampling="physical")
    batch = sample_batch(cfg, np.random.default_rng(4), 300)
    xi, th = 0.37, -1.1
    got_s = singles_batch(cfg, batch, xi, "Ds")
    got_i = singles_batch(cfg, batch, th, "Di")
    for k, s in enumerate(batch):
        es, ei = project_sample(cfg, s, AnalyzerSettings(xi, th))
        assert got_s[k] == pytest.approx(singles_intensity(es), abs=1e-12)
        assert got_i[k] == pytest.approx(singles_intensity(ei), abs=1e-12)


def test_zero_bandwidth_singles_exactly_half():
    acc = singles_mc(SourceConfig(bandwidth_sigma=0.0), math.radians(30), "Ds", 5000)
    assert acc.mean == 0.5 and acc.stderr == 0.0


def test_flat_singles_across_angles():
    cfg = SourceConfig()
    n = 200_000
    a = singles_mc(cfg, 0.0, "Ds", n, seed=1)
    b = singles_mc(cfg, math.pi / 4, "Ds", n, seed=2)
    pooled = math.hypot(a.stderr, b.stderr)
    assert abs(a.mean - b.mean) < 5 * pooled
    assert abs(b.mean - 0.5) < 5 * b.stderr
