from __future__ import annotations

import numpy as np

from ..core import Direction


def complex_dtype_for(dtype) -> np.dtype:
    dtype = np.dtype(dtype)
    if dtype in (np.float32, np.complex64):
        return np.dtype(np.complex64)
    return np.dtype(np.complex128)


def as_complex(x, dtype=None) -> np.ndarray:
    x = np.asarray(x)
    target = complex_dtype_for(x.dtype) if dtype is None else np.dtype(dtype)
    return np.ascontiguousarray(x, dtype=target)


def check_finite(x: np.ndarray) -> None:
    if not np.all(np.isfinite(x)):
        raise ValueError("input contains NaN or Inf")


def roots_of_unity(n: int, direction: Direction, count: int | None = None) -> np.ndarray:
    """exp(sign * 2*pi*i * r / n) for r in [0, count), evaluated in double."""
    r = np.arange(n if count is None else count, dtype=np.float64)
    return np.exp(direction.sign * 2j * np.pi * r / n)


class IdentityPlan:
    """Length-1 transform."""

    algorithm = "identity"
    nbytes = 0

    def __init__(self, n: int, direction: Direction, dtype):
        self.n = n
        self.direction = direction
        self.dtype = np.dtype(dtype)

    def execute(self, x: np.ndarray) -> np.ndarray:
        return np.array(x, dtype=self.dtype, copy=True)
