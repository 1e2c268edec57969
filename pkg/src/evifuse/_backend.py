"""Kernel backend selection.

The env var ``EVIFUSE_BACKEND`` picks the implementation of the hot
special-function kernels:

* unset or ``numba`` - numba-compiled kernels when numba is importable,
  otherwise the pure-numpy fallback (unset only; ``numba`` requires it);
* ``numpy`` - force the pure-numpy fallback.

``digamma``, ``trigamma`` and ``gammaln`` accept float64 scalars or
arrays of any shape and evaluate elementwise.
"""

import os

from . import _kernels_numpy

_env = os.environ.get("EVIFUSE_BACKEND", "").strip().lower()
if _env not in ("", "numba", "numpy"):
    raise ValueError(
        f"EVIFUSE_BACKEND must be 'numba' or 'numpy', got {_env!r}"
    )

if _env == "numpy":
    BACKEND = "numpy"
else:
    try:
        from . import _kernels_numba

        BACKEND = "numba"
    except ImportError:
        if _env == "numba":
            raise
        BACKEND = "numpy"

if BACKEND == "numba":
    digamma = _kernels_numba.digamma
    trigamma = _kernels_numba.trigamma
    gammaln = _kernels_numba.gammaln
else:
    digamma = _kernels_numpy.digamma
    trigamma = _kernels_numpy.trigamma
    gammaln = _kernels_numpy.gammaln
