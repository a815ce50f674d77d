"""Recursive Cooley-Tukey decimation in time for {2,3,5,7}-smooth lengths.

With n = n1*n2, j = j1*n2 + j2 and k = k1 + k2*n1, every level performs
n2 size-n1 DFTs over j1, scales by exp(sign*2*pi*i*j2*k1/n) and recurses
into n1 transforms of size n2. The radix n1 is always the smallest
remaining prime factor.
"""

from __future__ import annotations

import numpy as np

from ..core import Direction
from ._common import as_complex, check_finite, complex_dtype_for
from .factor import factorize

MAX_RADIX = 7


class MixedRadixPlan:
    algorithm = "mixed_radix"

    def __init__(self, n: int, direction: Direction, dtype=np.complex128):
        factors = factorize(n)
        if not factors or factors[-1] > MAX_RADIX:
            raise ValueError(f"mixed radix needs a {{2,3,5,7}}-smooth length >= 2, got {n}")
        self.n = n
        self.direction = direction
        self.dtype = complex_dtype_for(dtype)
        sign = direction.sign
        self.levels = []
        length = n
        for radix in factors:
            sub = length // radix
            k1 = np.arange(radix)
            butterfly = np.exp(sign * 2j * np.pi * np.outer(k1, k1) / radix)
            twiddle = np.exp(sign * 2j * np.pi * np.outer(k1, np.arange(sub)) / length)
            self.levels.append(
                (radix, sub, butterfly.astype(self.dtype), twiddle.astype(self.dtype))
            )
            length = sub

    @property
    def nbytes(self) -> int:
        tables = sum(b.nbytes + t.nbytes for _, _, b, t in self.levels)
        return tables + 2 * self.n * self.dtype.itemsize

    def execute(self, x: np.ndarray) -> np.ndarray:
        """Transform along the last axis; leading axes are a batch."""
        x = as_complex(x, self.dtype)
        if x.shape[-1] != self.n:
            raise ValueError(f"expected last axis of length {self.n}, got {x.shape[-1]}")
        rows = x.reshape(-1, self.n)
        return self._level(rows, 0).reshape(x.shape)

    def _level(self, rows: np.ndarray, depth: int) -> np.ndarray:
        if depth == len(self.levels):
            return rows
        radix, sub, butterfly, twiddle = self.levels[depth]
        batch = rows.shape[0]
        # u[b, k1, j2] = sum_j1 F[k1, j1] * x[b, j1*sub + j2]
        u = np.matmul(butterfly, rows.reshape(batch, radix, sub))
        if sub > 1:
            u *= twiddle
        y = self._level(u.reshape(batch * radix, sub), depth + 1)
        # y[b, k1, k2] holds X[k1 + k2*radix]
        return y.reshape(batch, radix, sub).transpose(0, 2, 1).reshape(batch, radix * sub)


def fft_mixed_radix(x, direction: Direction = Direction.FORWARD) -> np.ndarray:
    x = as_complex(x)
    check_finite(x)
    return MixedRadixPlan(x.shape[-1], direction, x.dtype).execute(x)
