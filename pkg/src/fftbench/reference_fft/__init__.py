"""Built-in transform kernels: a naive DFT oracle and fast arbitrary-size FFTs."""

from .bluestein import BluesteinPlan, fft_bluestein
from .dispatch import fft_any, make_plan, select_algorithm
from .factor import factorize
from .mixed_radix import MixedRadixPlan, fft_mixed_radix
from .naive import NaivePlan, dft_naive
from .nd import C2RPlan, NdPlan, R2CPlan, c2r_inverse, fft_nd, normalize, r2c_forward
from .stockham import StockhamPlan, fft_stockham_radix2

__all__ = [
    "BluesteinPlan",
    "C2RPlan",
    "MixedRadixPlan",
    "NaivePlan",
    "NdPlan",
    "R2CPlan",
    "StockhamPlan",
    "c2r_inverse",
    "dft_naive",
    "factorize",
    "fft_any",
    "fft_bluestein",
    "fft_mixed_radix",
    "fft_nd",
    "fft_stockham_radix2",
    "make_plan",
    "normalize",
    "r2c_forward",
    "select_algorithm",
]
