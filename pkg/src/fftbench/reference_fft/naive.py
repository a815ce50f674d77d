"""Direct O(n^2) evaluation of the discrete Fourier transform.

Used as the correctness oracle for the fast kernels and as the backing
kernel of the ``NaiveDFT`` client.
"""

from __future__ import annotations

import numpy as np

from ..core import Direction
from ._common import as_complex, check_finite, complex_dtype_for, roots_of_unity

# Bounds the (rows x n) twiddle block materialized per matmul.
_BLOCK_ELEMENTS = 1 << 20
# Lengths up to this keep the whole (symmetric) DFT matrix in the plan.
_MATRIX_MAX_LENGTH = 128


class NaivePlan:
    algorithm = "naive"

    def __init__(self, n: int, direction: Direction, dtype=np.complex128):
        if n < 1:
            raise ValueError(f"length must be positive, got {n}")
        self.n = n
        self.direction = direction
        self.dtype = complex_dtype_for(dtype)
        self.roots = roots_of_unity(n, direction).astype(self.dtype)
        # rows 0..n//2 suffice: row n-k is the conjugate of row k
        self.rows = n // 2 + 1
        self.block_rows = max(1, min(self.rows, _BLOCK_ELEMENTS // n))
        self._index_dtype = np.uint32 if n <= 1 << 16 else np.uint64
        self.matrix = None
        if n <= _MATRIX_MAX_LENGTH:
            self.matrix = self.roots[self._indices(np.arange(n, dtype=self._index_dtype))]

    @property
    def nbytes(self) -> int:
        if self.matrix is not None:
            return self.roots.nbytes + self.matrix.nbytes
        # root table plus one index block and one twiddle block
        block = self.block_rows * self.n
        return self.roots.nbytes + block * (np.dtype(self._index_dtype).itemsize + self.dtype.itemsize)

    def _indices(self, k: np.ndarray) -> np.ndarray:
        """(k*j) mod n for every j; exact integer phase before the table lookup."""
        n = self.n
        idx = np.multiply.outer(k, np.arange(n, dtype=self._index_dtype))
        if n & (n - 1) == 0:
            np.bitwise_and(idx, n - 1, out=idx)
        else:
            np.remainder(idx, n, out=idx)
        return idx

    def execute(self, x: np.ndarray) -> np.ndarray:
        """Transform along the last axis; leading axes are a batch."""
        x = as_complex(x, self.dtype)
        n = self.n
        if x.shape[-1] != n:
            raise ValueError(f"expected last axis of length {n}, got {x.shape[-1]}")
        if self.matrix is not None:
            return x @ self.matrix
        out = np.empty_like(x)
        # X[k] = x . W[k] and X[n-k] = conj(conj(x) . W[k])
        pair = np.stack([x, np.conj(x)], axis=-2)
        j = np.arange(n, dtype=self._index_dtype)
        for start in range(0, self.rows, self.block_rows):
            k = j[start : min(start + self.block_rows, self.rows)]
            both = pair @ self.roots[self._indices(k)].T
            out[..., k] = both[..., 0, :]
            mirror = k[(k > 0) & (2 * k < n)]
            out[..., n - mirror] = np.conj(both[..., 1, mirror - start])
        return out


def dft_naive(x, direction: Direction = Direction.FORWARD) -> np.ndarray:
    """X[k] = sum_j x[j] exp(sign*2*pi*i*j*k/n), unnormalized in both directions.

    A 1-D input is the documented case; leading axes are treated as a batch.
    """
    x = as_complex(x)
    check_finite(x)
    return NaivePlan(x.shape[-1], direction, x.dtype).execute(x)
