"""Both kernel backends agree with each other and with the closed forms."""
import math

import numpy as np
import pytest

from sagnac import kernels

BACKENDS = kernels.available_backends()


def arrays(n=2000, seed=0):
    rng = np.random.default_rng(seed)
    return rng.normal(0, 1e4, n), rng.normal(0, 1e4, n), rng.uniform(0, 1, n), rng.uniform(0, 1, n)


def test_fallback_always_available():
    assert "python" in BACKENDS
    assert kernels.BACKEND in BACKENDS


@pytest.mark.skipif("cython" not in BACKENDS, reason="compiled kernels not built")
def test_backends_agree():
    c, p = BACKENDS["cython"], BACKENDS["python"]
    dj, dk, t1, t2 = arrays()
    for xi in (0.0, 0.3, 1.2):
        np.testing.assert_allclose(c.signal_intensity(dj, dk, t1, t2, xi, 1.3, math.pi / 2),
                                   p.signal_intensity(dj, dk, t1, t2, xi, 1.3, math.pi / 2), atol=1e-12)
        np.testing.assert_allclose(c.idler_intensity(dj, dk, t1, t2, xi, 1.3, 0.4),
                                   p.idler_intensity(dj, dk, t1, t2, xi, 1.3, 0.4), atol=1e-12)
        for post in (True, False):
            args = (dj, dk, t1, t2, t1 + 1e-3, t2 + 1e-3, xi, 0.7, 1.1, math.pi / 2, post)
            np.testing.assert_allclose(c.coincidence(*args), p.coincidence(*args), atol=1e-12)
    v = np.random.default_rng(1).normal(3, 2, 10_001)
    nc, mc, m2c = c.moments(v)
    np_, mp, m2p = p.moments(v)
    assert nc == np_ and mc == pytest.approx(mp, rel=1e-12) and m2c == pytest.approx(m2p, rel=1e-10)


def test_singles_closed_form(backend):
    dj, dk, t1, t2 = arrays(seed=3)
    d = dj * t1 - dk * t2
    xi = 0.8
    s = kernels.signal_intensity(dj, dk, t1, t2, xi, 1.0, math.pi / 2)
    i = kernels.idler_intensity(dj, dk, t1, t2, xi, 1.0, math.pi / 2)
    np.testing.assert_allclose(s, 0.5 * (1 - math.sin(2 * xi) * np.sin(d)), atol=1e-10)
    np.testing.assert_allclose(i, 0.5 * (1 + math.sin(2 * xi) * np.sin(d)), atol=1e-10)


def test_post_selected_is_constant(backend):
    dj, dk, t1, t2 = arrays(seed=4)
    v = kernels.coincidence(dj, dk, t1, t2, t1, t2, 0.2, 1.4, 1.0, math.pi / 2, True)
    np.testing.assert_allclose(v, 0.25 * math.sin(1.2) ** 2, atol=1e-12)


def test_moments_empty(backend):
    assert kernels.moments(np.array([])) == (0, 0.0, 0.0)


@pytest.mark.parametrize("post", [True, False])
def test_grid_kernel_matches_single_setting_kernel(backend, post):
    dj, dk, t1, t2 = arrays(500, seed=6)
    xis = np.array([0.0, 0.4, 1.9, -0.7])
    thetas = np.array([0.3, 0.4, -1.0, 2.2])
    grid = kernels.coincidence_grid(dj, dk, t1, t2, t1 + 0.01, t2 + 0.02, xis, thetas, 1.2, math.pi / 2, post)
    assert grid.shape == (500, 4)
    for j, (x, t) in enumerate(zip(xis, thetas)):
        single = kernels.coincidence(dj, dk, t1, t2, t1 + 0.01, t2 + 0.02, x, t, 1.2, math.pi / 2, post)
        np.testing.assert_allclose(grid[:, j], single, atol=1e-12)
