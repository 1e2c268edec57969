"""numba-compiled special-function kernels (digamma, trigamma, log-gamma).

Same algorithm as the pure-numpy twin in ``_kernels_numpy``: recurrence
lift of the argument to >= 10, then the Bernoulli-number asymptotic tail.
Invalid arguments (x <= 0, nan) yield nan; callers validate at the API
boundary so compiled code never raises.
"""

import math

from numba import vectorize

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LIFT = 10.0


@vectorize(["float64(float64)"], nopython=True, cache=True)
def digamma(x):
    if not (x > 0.0) or x == math.inf:
        return math.nan
    res = 0.0
    while x < _LIFT:
        res -= 1.0 / x
        x += 1.0
    z = 1.0 / (x * x)
    poly = 1.0 / 12.0
    poly = poly * z - 691.0 / 32760.0
    poly = poly * z + 1.0 / 132.0
    poly = poly * z - 1.0 / 240.0
    poly = poly * z + 1.0 / 252.0
    poly = poly * z - 1.0 / 120.0
    poly = poly * z + 1.0 / 12.0
    return res + math.log(x) - 0.5 / x - z * poly


@vectorize(["float64(float64)"], nopython=True, cache=True)
def trigamma(x):
    if not (x > 0.0) or x == math.inf:
        return math.nan
    res = 0.0
    while x < _LIFT:
        res += 1.0 / (x * x)
        x += 1.0
    z = 1.0 / (x * x)
    poly = 7.0 / 6.0
    poly = poly * z - 691.0 / 2730.0
    poly = poly * z + 5.0 / 66.0
    poly = poly * z - 1.0 / 30.0
    poly = poly * z + 1.0 / 42.0
    poly = poly * z - 1.0 / 30.0
    poly = poly * z + 1.0 / 6.0
    return res + 1.0 / x + 0.5 * z + (z / x) * poly


@vectorize(["float64(float64)"], nopython=True, cache=True)
def gammaln(x):
    if not (x > 0.0) or x == math.inf:
        return math.nan
    corr = 0.0
    while x < _LIFT:
        corr += math.log(x)
        x += 1.0
    z = 1.0 / (x * x)
    poly = 1.0 / 156.0
    poly = poly * z - 691.0 / 360360.0
    poly = poly * z + 1.0 / 1188.0
    poly = poly * z - 1.0 / 1680.0
    poly = poly * z + 1.0 / 1260.0
    poly = poly * z - 1.0 / 360.0
    poly = poly * z + 1.0 / 12.0
    return (x - 0.5) * math.log(x) - x + _HALF_LOG_2PI + poly / x - corr
