# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled batch kernels; same contracts as ``sagnac._pykernels``."""
import numpy as np
from libc.math cimport sin, cos


def signal_intensity(const double[::1] dj, const double[::1] dk,
                     const double[::1] t1, const double[::1] t2,
                     double xi, double e0, double p2):
    cdef Py_ssize_t n = dj.shape[0], k
    out = np.empty(n)
    cdef double[::1] o = out
    cdef double sx = sin(xi), cx = cos(xi), a, b, re, im
    cdef double half = 0.5 * e0 * e0
    with nogil:
        for k in range(n):
            a = dj[k] * t1[k]
            b = dk[k] * t2[k] + p2
            re = -sx * cos(a) + cx * cos(b)
            im = -sx * sin(a) + cx * sin(b)
            o[k] = half * (re * re + im * im)
    return out


def idler_intensity(const double[::1] dj, const double[::1] dk,
                    const double[::1] t1, const double[::1] t2,
                    double theta, double e0, double p2):
    cdef Py_ssize_t n = dj.shape[0], k
    out = np.empty(n)
    cdef double[::1] o = out
    cdef double st = sin(theta), ct = cos(theta), a, b, re, im
    cdef double half = 0.5 * e0 * e0
    with nogil:
        for k in range(n):
            a = dj[k] * t1[k]
            b = dk[k] * t2[k] + p2
            re = ct * cos(a) + st * cos(b)
            im = -ct * sin(a) - st * sin(b)
            o[k] = half * (re * re + im * im)
    return out


def coincidence(const double[::1] dj, const double[::1] dk,
                const double[::1] sa1, const double[::1] sa2,
                const double[::1] sb1, const double[::1] sb2,
                double xi, double theta, double e0, double p2, bint post_selected):
    cdef Py_ssize_t n = dj.shape[0], k
    out = np.empty(n)
    cdef double[::1] o = out
    cdef double sx = sin(xi), cx = cos(xi), st = sin(theta), ct = cos(theta)
    cdef double q = 0.25 * e0 * e0 * e0 * e0
    cdef double a1, b1, a2, b2
    cdef double s1r, s1i, s2r, s2i, i1r, i1i, i2r, i2i, re, im, ps, pi_
    with nogil:
        for k in range(n):
            a1 = dj[k] * sa1[k]
            b1 = dk[k] * sa2[k] + p2
            a2 = dj[k] * sb1[k]
            b2 = dk[k] * sb2[k] + p2
            s1r = -sx * cos(a1)
            s1i = -sx * sin(a1)
            s2r = cx * cos(b1)
            s2i = cx * sin(b1)
            i1r = ct * cos(a2)
            i1i = -ct * sin(a2)
            i2r = st * cos(b2)
            i2i = -st * sin(b2)
            if post_selected:
                re = (s1r * i1r - s1i * i1i) + (s2r * i2r - s2i * i2i)
                im = (s1r * i1i + s1i * i1r) + (s2r * i2i + s2i * i2r)
                o[k] = q * (re * re + im * im)
            else:
                re = s1r + s2r
                im = s1i + s2i
                ps = re * re + im * im
                re = i1r + i2r
                im = i1i + i2i
                pi_ = re * re + im * im
                o[k] = q * ps * pi_
    return out


def moments(const double[::1] values):
    """Welford pass: (count, mean, sum of squared deviations)."""
    cdef Py_ssize_t n = values.shape[0], k
    cdef double mean = 0.0, m2 = 0.0, d
    with nogil:
        for k in range(n):
            d = values[k] - mean
            mean += d / (k + 1)
            m2 += d * (values[k] - mean)
    return int(n), mean, m2


def coincidence_grid(const double[::1] dj, const double[::1] dk,
                     const double[::1] sa1, const double[::1] sa2,
                     const double[::1] sb1, const double[::1] sb2,
                     const double[::1] xis, const double[::1] thetas,
                     double e0, double p2, bint post_selected):
    """``coincidence`` for m settings at once, shape (n, m); phases are shared."""
    cdef Py_ssize_t n = dj.shape[0], m = xis.shape[0], k, j
    out = np.empty((n, m))
    cdef double[:, ::1] o = out
    sx_a = np.sin(xis)
    cx_a = np.cos(xis)
    st_a = np.sin(thetas)
    ct_a = np.cos(thetas)
    cdef const double[::1] sx = sx_a, cx = cx_a, st = st_a, ct = ct_a
    cdef double q = 0.25 * e0 * e0 * e0 * e0
    cdef double ca1, sa1_, cb1, sb1_, ca2, sa2_, cb2, sb2_
    cdef double re, im, ps, pi_, s1r, s1i, s2r, s2i, i1r, i1i, i2r, i2i
    with nogil:
        for k in range(n):
            ca1 = cos(dj[k] * sa1[k])
            sa1_ = sin(dj[k] * sa1[k])
            cb1 = cos(dk[k] * sa2[k] + p2)
            sb1_ = sin(dk[k] * sa2[k] + p2)
            ca2 = cos(dj[k] * sb1[k])
            sa2_ = sin(dj[k] * sb1[k])
            cb2 = cos(dk[k] * sb2[k] + p2)
            sb2_ = sin(dk[k] * sb2[k] + p2)
            for j in range(m):
                s1r = -sx[j] * ca1
                s1i = -sx[j] * sa1_
                s2r = cx[j] * cb1
                s2i = cx[j] * sb1_
                i1r = ct[j] * ca2
                i1i = -ct[j] * sa2_
                i2r = st[j] * cb2
                i2i = -st[j] * sb2_
                if post_selected:
                    re = (s1r * i1r - s1i * i1i) + (s2r * i2r - s2i * i2i)
                    im = (s1r * i1i + s1i * i1r) + (s2r * i2i + s2i * i2r)
                    o[k, j] = q * (re * re + im * im)
                else:
                    re = s1r + s2r
                    im = s1i + s2i
                    ps = re * re + im * im
                    re = i1r + i2r
                    im = i1i + i2i
                    pi_ = re * re + im * im
                    o[k, j] = q * ps * pi_
    return out
