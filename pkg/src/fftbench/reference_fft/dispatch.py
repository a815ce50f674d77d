from __future__ import annotations

import numpy as np

from ..core import Direction
from ._common import IdentityPlan, as_complex, check_finite
from .bluestein import BluesteinPlan
from .factor import factorize
from .mixed_radix import MAX_RADIX, MixedRadixPlan
from .naive import NaivePlan
from .stockham import StockhamPlan

_PLANS = {
    "stockham": StockhamPlan,
    "mixed_radix": MixedRadixPlan,
    "bluestein": BluesteinPlan,
    "naive": NaivePlan,
}


def select_algorithm(n: int) -> str:
    """Kernel chosen by ``fft_any`` for length ``n``."""
    if n < 2:
        raise ValueError(f"length must be >= 2, got {n}")
    factors = factorize(n)
    if factors[-1] == 2:
        return "stockham"
    if factors[-1] <= MAX_RADIX:
        return "mixed_radix"
    return "bluestein"


def make_plan(n: int, direction: Direction, dtype=np.complex128, algorithm: str = "auto"):
    """Build a 1-D plan for the last axis. ``algorithm="auto"`` dispatches by factorization."""
    if n == 1:
        return IdentityPlan(n, direction, dtype)
    if algorithm == "auto":
        algorithm = select_algorithm(n)
    try:
        cls = _PLANS[algorithm]
    except KeyError:
        raise ValueError(f"unknown algorithm {algorithm!r}") from None
    return cls(n, direction, dtype)


def fft_any(x, direction: Direction = Direction.FORWARD) -> np.ndarray:
    x = as_complex(x)
    check_finite(x)
    return make_plan(x.shape[-1], direction, x.dtype).execute(x)
