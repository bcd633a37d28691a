"""Pure-numpy batch kernels. Reference fallback for the compiled ``_ckernels``.

All kernels take contiguous float64 arrays of equal length and evaluate the
fields at amplitude level; the common prefactor phase is dropped because it
cancels in every intensity.
"""
import numpy as np


def _signal_bracket(dj, dk, t1, t2, xi, p2):
    return -np.sin(xi) * np.exp(1j * (dj * t1)) + np.cos(xi) * np.exp(1j * (dk * t2 + p2))


def _idler_bracket(dj, dk, t1, t2, theta, p2):
    return np.cos(theta) * np.exp(-1j * (dj * t1)) + np.sin(theta) * np.exp(-1j * (dk * t2 + p2))


def _abs2(z):
    return z.real * z.real + z.imag * z.imag


def signal_intensity(dj, dk, t1, t2, xi, e0, p2):
    return 0.5 * e0 * e0 * _abs2(_signal_bracket(dj, dk, t1, t2, xi, p2))


def idler_intensity(dj, dk, t1, t2, theta, e0, p2):
    return 0.5 * e0 * e0 * _abs2(_idler_bracket(dj, dk, t1, t2, theta, p2))


def coincidence(dj, dk, sa1, sa2, sb1, sb2, xi, theta, e0, p2, post_selected):
    """Per-trial coincidence value.

    ``sa*``/``sb*`` are the (path 1, path 2) time labels at the signal and
    idler ports. Post-selected keeps only same-path amplitude products;
    otherwise the two singles intensities are multiplied.
    """
    q = 0.25 * e0 ** 4
    if post_selected:
        s1 = -np.sin(xi) * np.exp(1j * (dj * sa1))
        s2 = np.cos(xi) * np.exp(1j * (dk * sa2 + p2))
        i1 = np.cos(theta) * np.exp(-1j * (dj * sb1))
        i2 = np.sin(theta) * np.exp(-1j * (dk * sb2 + p2))
        return q * _abs2(s1 * i1 + s2 * i2)
    s = _abs2(_signal_bracket(dj, dk, sa1, sa2, xi, p2))
    i = _abs2(_idler_bracket(dj, dk, sb1, sb2, theta, p2))
    return q * s * i


def coincidence_grid(dj, dk, sa1, sa2, sb1, sb2, xis, thetas, e0, p2, post_selected):
    """``coincidence`` for m settings at once, shape (n, m); phases are shared."""
    q = 0.25 * e0 ** 4
    ea1 = np.exp(1j * (dj * sa1))[:, None]
    eb1 = np.exp(1j * (dk * sa2 + p2))[:, None]
    ea2 = np.exp(-1j * (dj * sb1))[:, None]
    eb2 = np.exp(-1j * (dk * sb2 + p2))[:, None]
    sx, cx = np.sin(xis)[None, :], np.cos(xis)[None, :]
    st, ct = np.sin(thetas)[None, :], np.cos(thetas)[None, :]
    if post_selected:
        return q * _abs2(-sx * ct * (ea1 * ea2) + cx * st * (eb1 * eb2))
    return q * _abs2(-sx * ea1 + cx * eb1) * _abs2(ct * ea2 + st * eb2)


def moments(values):
    """(count, mean, sum of squared deviations) of a 1-D array."""
    n = values.shape[0]
    if n == 0:
        return 0, 0.0, 0.0
    mean = float(values.mean())
    d = values - mean
    return n, mean, float(d @ d)
