"""Pure-numpy fallback for the special-function kernels.

Element-for-element the same operation sequence as ``_kernels_numba``
(recurrence lift to >= 10, Bernoulli asymptotic tail, identical Horner
order), so the two backends agree to within a few ulps. Invalid inputs
map to nan.
"""

import math

import numpy as np

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LIFT = 10.0


def _lift(x, step):
    """Apply `acc = step(x); x += 1` per element until every x >= _LIFT."""
    x = x.copy()
    acc = np.zeros_like(x)
    mask = x < _LIFT
    while mask.any():
        acc[mask] += step(x[mask])
        x[mask] += 1.0
        mask = x < _LIFT
    return x, acc


def _eval(x, scalar_in, core):
    arr = np.asarray(x, dtype=np.float64)
    valid = (arr > 0.0) & np.isfinite(arr)
    safe = np.where(valid, arr, 1.0)
    out = np.where(valid, core(safe), np.nan)
    return float(out[()]) if scalar_in else out


def digamma(x):
    def core(v):
        v, acc = _lift(v, lambda t: -1.0 / t)
        z = 1.0 / (v * v)
        poly = np.full_like(v, 1.0 / 12.0)
        poly = poly * z - 691.0 / 32760.0
        poly = poly * z + 1.0 / 132.0
        poly = poly * z - 1.0 / 240.0
        poly = poly * z + 1.0 / 252.0
        poly = poly * z - 1.0 / 120.0
        poly = poly * z + 1.0 / 12.0
        return acc + np.log(v) - 0.5 / v - z * poly

    return _eval(x, np.isscalar(x), core)


def trigamma(x):
    def core(v):
        v, acc = _lift(v, lambda t: 1.0 / (t * t))
        z = 1.0 / (v * v)
        poly = np.full_like(v, 7.0 / 6.0)
        poly = poly * z - 691.0 / 2730.0
        poly = poly * z + 5.0 / 66.0
        poly = poly * z - 1.0 / 30.0
        poly = poly * z + 1.0 / 42.0
        poly = poly * z - 1.0 / 30.0
        poly = poly * z + 1.0 / 6.0
        return acc + 1.0 / v + 0.5 * z + (z / v) * poly

    return _eval(x, np.isscalar(x), core)


def gammaln(x):
    def core(v):
        v, corr = _lift(v, np.log)
        z = 1.0 / (v * v)
        poly = np.full_like(v, 1.0 / 156.0)
        poly = poly * z - 691.0 / 360360.0
        poly = poly * z + 1.0 / 1188.0
        poly = poly * z - 1.0 / 1680.0
        poly = poly * z + 1.0 / 1260.0
        poly = poly * z - 1.0 / 360.0
        poly = poly * z + 1.0 / 12.0
        return (v - 0.5) * np.log(v) - v + _HALF_LOG_2PI + poly / v - corr

    return _eval(x, np.isscalar(x), core)
