"""Counter-based deterministic random streams.

Every random draw in this package comes from a single, fully specified
scheme so that runs are bit-for-bit reproducible from a 64-bit seed and
the stream can be re-implemented in any language:

* Raw words: ``u64(seed, i) = mix64((seed + (i + 1) * GOLDEN) mod 2**64)``,
  where ``mix64`` is the splitmix64 finalizer
  (``z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
  z *= 0x94D049BB133111EB; z ^= z >> 31``) and
  ``GOLDEN = 0x9E3779B97F4A7C15``. The counter ``i`` starts at 0.
* Uniforms in [0, 1): the top 53 bits, ``(u64 >> 11) * 2.0**-53``.
* Normals: Box-Muller on consecutive uniform pairs. Pair ``(w0, w1)``
  yields ``r = sqrt(-2 ln(u1))`` with ``u1 = ((w0 >> 11) + 1) * 2.0**-53``
  (strictly positive) and ``t = 2 pi * u2`` with ``u2 = (w1 >> 11) * 2.0**-53``;
  the two variates are ``r cos(t)`` and ``r sin(t)``. A request for an odd
  number of normals still consumes a whole number of pairs and drops the
  final ``r sin(t)``.
* Substreams: ``derive(seed, label) = mix64(seed XOR mix64(label + 1))``.
  Labels are small non-negative integers; each module documents the labels
  it uses.

``Stream`` is a thin stateful cursor over the counter; consumers that need
a documented layout (the dataset generator) instead index counters
explicitly through the module-level functions.
"""

from __future__ import annotations

import math

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)

_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK = (1 << 64) - 1


def mix64(z: np.ndarray | np.uint64) -> np.ndarray | np.uint64:
    """splitmix64 finalizer on uint64 scalars or arrays (modular arithmetic)."""
    z = np.uint64(z) if np.isscalar(z) or isinstance(z, int) else z.astype(np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
        return z ^ (z >> np.uint64(31))


def derive(seed: int, label: int) -> int:
    """Derive an independent substream seed for a documented integer label."""
    s = np.uint64(seed & _MASK)
    return int(mix64(s ^ mix64(np.uint64((label + 1) & _MASK))))


def raw_u64(seed: int, start: int, n: int) -> np.ndarray:
    """Words start..start+n-1 of the counter stream for `seed`."""
    idx = np.arange(start + 1, start + n + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64(np.uint64(seed & _MASK) + idx * GOLDEN)


def uniforms(seed: int, start: int, n: int) -> np.ndarray:
    """n uniforms in [0, 1), one counter word each."""
    return (raw_u64(seed, start, n) >> np.uint64(11)) * 2.0 ** -53


def normals(seed: int, start: int, n: int) -> np.ndarray:
    """n standard normals via Box-Muller; consumes 2*ceil(n/2) counter words."""
    pairs = (n + 1) // 2
    w = raw_u64(seed, start, 2 * pairs).reshape(pairs, 2)
    u1 = ((w[:, 0] >> np.uint64(11)) + np.uint64(1)) * 2.0 ** -53
    u2 = (w[:, 1] >> np.uint64(11)) * 2.0 ** -53
    r = np.sqrt(-2.0 * np.log(u1))
    t = (2.0 * math.pi) * u2
    out = np.empty(2 * pairs)
    out[0::2] = r * np.cos(t)
    out[1::2] = r * np.sin(t)
    return out[:n]


class Stream:
    """Stateful cursor over one counter stream.

    Draw order is the documented order of the consuming code; each call
    advances the cursor by the number of counter words it consumes.
    """

    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK
        self.cursor = 0

    def uniforms(self, n: int) -> np.ndarray:
        out = uniforms(self.seed, self.cursor, n)
        self.cursor += n
        return out

    def normals(self, n: int) -> np.ndarray:
        out = normals(self.seed, self.cursor, n)
        self.cursor += 2 * ((n + 1) // 2)
        return out

    def shuffle(self, n: int) -> np.ndarray:
        """Fisher-Yates permutation of range(n); consumes n-1 words."""
        idx = np.arange(n)
        if n < 2:
            return idx
        w = raw_u64(self.seed, self.cursor, n - 1)
        self.cursor += n - 1
        for k, i in enumerate(range(n - 1, 0, -1)):
            j = int(w[k] % np.uint64(i + 1))
            idx[i], idx[j] = idx[j], idx[i]
        return idx
