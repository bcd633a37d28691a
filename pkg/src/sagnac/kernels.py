"""Batch kernel dispatch.

The compiled extension is used when it was built; otherwise the numpy
fallback is loaded. Set ``SAGNAC_PURE_PYTHON=1`` to force the fallback.
"""
import os

import numpy as np

from . import _pykernels

try:
    if os.environ.get("SAGNAC_PURE_PYTHON"):
        raise ImportError("pure-python backend requested")
    from . import _ckernels as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _pykernels
    BACKEND = "python"


def available_backends():
    names = {"python": _pykernels}
    try:
        from . import _ckernels

        names["cython"] = _ckernels
    except ImportError:
        pass
    return names


def _arr(x):
    return np.ascontiguousarray(x, dtype=np.float64)


def signal_intensity(dj, dk, t1, t2, xi, e0, p2):
    return _impl.signal_intensity(_arr(dj), _arr(dk), _arr(t1), _arr(t2), float(xi), float(e0), float(p2))


def idler_intensity(dj, dk, t1, t2, theta, e0, p2):
    return _impl.idler_intensity(_arr(dj), _arr(dk), _arr(t1), _arr(t2), float(theta), float(e0), float(p2))


def coincidence(dj, dk, sa1, sa2, sb1, sb2, xi, theta, e0, p2, post_selected):
    return _impl.coincidence(
        _arr(dj), _arr(dk), _arr(sa1), _arr(sa2), _arr(sb1), _arr(sb2),
        float(xi), float(theta), float(e0), float(p2), bool(post_selected),
    )


def coincidence_grid(dj, dk, sa1, sa2, sb1, sb2, xis, thetas, e0, p2, post_selected):
    return _impl.coincidence_grid(
        _arr(dj), _arr(dk), _arr(sa1), _arr(sa2), _arr(sb1), _arr(sb2),
        _arr(xis), _arr(thetas), float(e0), float(p2), bool(post_selected),
    )


def moments(values):
    return _impl.moments(_arr(values))
