"""Deterministic random streams for instance generation.

Problem instances must be reproducible from a single integer seed, on any
machine that implements the same scheme.  The scheme is fixed and fully
documented here:

* Bit source: Philox4x64-10 (Salmon et al. 2011) keyed by the seed, counter
  starting at zero.  The raw 64-bit outputs are consumed strictly in stream
  order.
* ``uniform()``: next uint64 ``u`` mapped to ``(u >> 11) * 2**-53``, a double
  in ``[0, 1)``.
* ``normal()``: Box-Muller on two uniforms; ``u1`` is shifted into ``(0, 1]``
  as ``((u >> 11) + 1) * 2**-53`` so the log is finite.  The cosine branch is
  returned first, the sine branch on the next call.
* ``randint(lo, hi)``: ``lo + (next uint64 mod (hi - lo + 1))``, inclusive.
  The modulo fold has bias below 2**-50 for the single-digit ranges used here.
* ``shuffle``: Fisher-Yates from the last element down, using ``randint``.
"""

from __future__ import annotations

import math

import numpy as np

_BUFFER = 256


class PortableRng:
    """Seeded stream with a documented, cross-language-reproducible layout."""

    def __init__(self, seed: int):
        if seed < 0:
            raise ValueError(f"seed must be non-negative, got {seed}")
        self.seed = seed
        self._bits = np.random.Philox(key=seed)
        self._buf: list[int] = []
        self._spare_normal: float | None = None

    def _next_u64(self) -> int:
        if not self._buf:
            self._buf = [int(x) for x in self._bits.random_raw(_BUFFER)][::-1]
        return self._buf.pop()

    def uniform(self) -> float:
        """Double in [0, 1)."""
        return (self._next_u64() >> 11) * 2.0**-53

    def normal(self) -> float:
        """Standard normal via Box-Muller."""
        if self._spare_normal is not None:
            z = self._spare_normal
            self._spare_normal = None
            return z
        u1 = ((self._next_u64() >> 11) + 1) * 2.0**-53
        u2 = (self._next_u64() >> 11) * 2.0**-53
        r = math.sqrt(-2.0 * math.log(u1))
        self._spare_normal = r * math.sin(2.0 * math.pi * u2)
        return r * math.cos(2.0 * math.pi * u2)

    def randint(self, lo: int, hi: int) -> int:
        """Integer uniform on [lo, hi], both ends inclusive."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        return lo + self._next_u64() % (hi - lo + 1)

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randint(0, i)
            items[i], items[j] = items[j], items[i]

    def normal_matrix(self, rows: int, cols: int) -> np.ndarray:
        out = np.empty((rows, cols), dtype=np.float64)
        for r in range(rows):
            for c in range(cols):
                out[r, c] = self.normal()
        return out
