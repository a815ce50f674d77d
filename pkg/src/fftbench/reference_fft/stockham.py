"""Radix-2 Stockham autosort FFT.

Each stage reads one buffer and writes the other, interleaving the two
half-length sub-transforms so the output lands in natural order without a
bit-reversal pass.
"""

from __future__ import annotations

import numpy as np

from ..core import Direction
from ._common import as_complex, check_finite, complex_dtype_for, roots_of_unity


class StockhamPlan:
    algorithm = "stockham"

    def __init__(self, n: int, direction: Direction, dtype=np.complex128):
        if n < 2 or n & (n - 1):
            raise ValueError(f"Stockham radix-2 needs a power of two >= 2, got {n}")
        self.n = n
        self.direction = direction
        self.dtype = complex_dtype_for(dtype)
        self.twiddles = []
        length = n
        while length > 1:
            half = length // 2
            w = roots_of_unity(length, direction, half).astype(self.dtype)
            self.twiddles.append(w[:, None])
            length = half

    @property
    def nbytes(self) -> int:
        # n-1 twiddles plus two ping-pong buffers
        table = sum(w.nbytes for w in self.twiddles)
        return table + 2 * self.n * self.dtype.itemsize

    def execute(self, x: np.ndarray) -> np.ndarray:
        """Transform along the last axis; leading axes are a batch."""
        x = as_complex(x, self.dtype)
        n = self.n
        if x.shape[-1] != n:
            raise ValueError(f"expected last axis of length {n}, got {x.shape[-1]}")
        batch = x.size // n
        src = x.reshape(batch, n)
        buffers = [np.empty((batch, n), self.dtype), np.empty((batch, n), self.dtype)]
        stride = 1
        for stage, w in enumerate(self.twiddles):
            half = w.shape[0]
            dst = buffers[stage % 2]
            a = src.reshape(batch, 2, half, stride)
            y = dst.reshape(batch, half, 2, stride)
            top, bottom = a[:, 0], a[:, 1]
            np.add(top, bottom, out=y[:, :, 0])
            np.subtract(top, bottom, out=y[:, :, 1])
            np.multiply(y[:, :, 1], w, out=y[:, :, 1])
            src = dst
            stride *= 2
        return src.reshape(x.shape)


def fft_stockham_radix2(x, direction: Direction = Direction.FORWARD) -> np.ndarray:
    x = as_complex(x)
    check_finite(x)
    return StockhamPlan(x.shape[-1], direction, x.dtype).execute(x)
