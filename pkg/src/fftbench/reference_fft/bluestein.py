"""Bluestein's chirp-z reformulation for arbitrary lengths.

Using j*k = (j^2 + k^2 - (k-j)^2) / 2 the length-n DFT becomes a circular
convolution of the chirped input with the conjugate chirp. The convolution
runs at the next power of two >= 2n-1 through the Stockham kernel.
"""

from __future__ import annotations

import numpy as np

from ..core import Direction, next_power_of_two
from ._common import as_complex, check_finite, complex_dtype_for
from .stockham import StockhamPlan


class BluesteinPlan:
    algorithm = "bluestein"

    def __init__(self, n: int, direction: Direction, dtype=np.complex128):
        if n < 2:
            raise ValueError(f"Bluestein needs n >= 2, got {n}")
        self.n = n
        self.direction = direction
        self.dtype = complex_dtype_for(dtype)
        self.m = m = next_power_of_two(2 * n - 1)

        k = np.arange(n, dtype=np.int64)
        # reduce k^2 mod 2n so the phase argument stays small and exact
        chirp = np.exp(direction.sign * 1j * np.pi * ((k * k) % (2 * n)) / n)
        filt = np.zeros(m, dtype=np.complex128)
        filt[:n] = chirp.conj()
        filt[m - n + 1 :] = chirp[1:].conj()[::-1]
        spectrum = StockhamPlan(m, Direction.FORWARD, np.complex128).execute(filt) / m

        self.chirp = chirp.astype(self.dtype)
        self.filter_spectrum = spectrum.astype(self.dtype)
        self._forward = StockhamPlan(m, Direction.FORWARD, self.dtype)
        self._inverse = StockhamPlan(m, Direction.INVERSE, self.dtype)

    @property
    def nbytes(self) -> int:
        return (
            self.chirp.nbytes
            + self.filter_spectrum.nbytes
            + self._forward.nbytes
            + self._inverse.nbytes
        )

    def execute(self, x: np.ndarray) -> np.ndarray:
        """Transform along the last axis; leading axes are a batch."""
        x = as_complex(x, self.dtype)
        n, m = self.n, self.m
        if x.shape[-1] != n:
            raise ValueError(f"expected last axis of length {n}, got {x.shape[-1]}")
        rows = x.reshape(-1, n)
        padded = np.zeros((rows.shape[0], m), dtype=self.dtype)
        np.multiply(rows, self.chirp, out=padded[:, :n])
        spec = self._forward.execute(padded)
        spec *= self.filter_spectrum
        conv = self._inverse.execute(spec)
        return (conv[:, :n] * self.chirp).reshape(x.shape)


def fft_bluestein(x, direction: Direction = Direction.FORWARD) -> np.ndarray:
    x = as_complex(x)
    check_finite(x)
    return BluesteinPlan(x.shape[-1], direction, x.dtype).execute(x)
