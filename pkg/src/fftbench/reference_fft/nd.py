"""Multi-dimensional and real-input transforms built from 1-D plans.

N-D transforms run axis by axis (last axis first). Non-final axes are
gathered into contiguous scratch before the 1-D kernel runs.

Real-to-complex output keeps ``n // 2 + 1`` bins along the last axis.
For even lengths on the fast path the real signal is folded into a
half-length complex sequence (even samples as real part, odd samples as
imaginary part) and split afterwards.
"""

from __future__ import annotations

import numpy as np

from ..core import Direction, Extents, total_elements
from ._common import as_complex, check_finite, complex_dtype_for, roots_of_unity
from .dispatch import make_plan

_RESIDUE_TOL = {np.dtype(np.complex64): 1e-6, np.dtype(np.complex128): 1e-10}


def _plan_axes(shape, direction, dtype, algorithm):
    plans = {}
    for n in set(shape):
        plans[n] = make_plan(n, direction, dtype, algorithm)
    return plans


def _apply_axis(plan, x: np.ndarray, axis: int) -> np.ndarray:
    if axis == x.ndim - 1:
        return plan.execute(np.ascontiguousarray(x))
    gathered = np.ascontiguousarray(np.moveaxis(x, axis, -1))
    return np.moveaxis(plan.execute(gathered), -1, axis)


class NdPlan:
    """Complex-to-complex transform over every axis of ``shape``."""

    def __init__(self, shape, direction: Direction, dtype=np.complex128, algorithm="auto"):
        self.shape = tuple(shape)
        self.direction = direction
        self.dtype = complex_dtype_for(dtype)
        self.plans = _plan_axes(self.shape, direction, self.dtype, algorithm)

    @property
    def nbytes(self) -> int:
        return sum(p.nbytes for p in self.plans.values())

    def execute(self, x: np.ndarray) -> np.ndarray:
        x = as_complex(x, self.dtype)
        if x.shape != self.shape:
            raise ValueError(f"expected shape {self.shape}, got {x.shape}")
        for axis in reversed(range(x.ndim)):
            x = _apply_axis(self.plans[x.shape[axis]], x, axis)
        return np.ascontiguousarray(x)


class R2CPlan:
    """Forward real-to-complex transform producing the packed half spectrum."""

    def __init__(self, extents: Extents, dtype=np.float64, algorithm="auto"):
        self.extents = extents
        self.shape = extents.dims
        self.dtype = complex_dtype_for(dtype)
        *lead, last = self.shape
        self.folded = algorithm != "naive" and last % 2 == 0
        if self.folded:
            half = last // 2
            self.last_plan = make_plan(half, Direction.FORWARD, self.dtype, algorithm)
            # exp(-2*pi*i*k/n) for k in [0, n/2]
            self.split_twiddle = roots_of_unity(last, Direction.FORWARD, half + 1).astype(
                self.dtype
            )
        else:
            self.last_plan = make_plan(last, Direction.FORWARD, self.dtype, algorithm)
        self.lead_plans = _plan_axes(lead, Direction.FORWARD, self.dtype, algorithm)

    @property
    def nbytes(self) -> int:
        total = self.last_plan.nbytes + sum(p.nbytes for p in self.lead_plans.values())
        if self.folded:
            total += self.split_twiddle.nbytes
        return total

    def execute(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        if x.shape != self.shape:
            raise ValueError(f"expected shape {self.shape}, got {x.shape}")
        last = self.shape[-1]
        if self.folded:
            real = x.astype(self.dtype.type(0).real.dtype, copy=False)
            z = np.empty((*self.shape[:-1], last // 2), dtype=self.dtype)
            z.real = real[..., 0::2]
            z.imag = real[..., 1::2]
            zf = self.last_plan.execute(z)
            # Z[k] and conj(Z[n/2 - k]) for k = 0..n/2 with Z periodic
            zk = np.concatenate([zf, zf[..., :1]], axis=-1)
            zr = np.conj(zk[..., ::-1])
            even = 0.5 * (zk + zr)
            odd = -0.5j * (zk - zr)
            spec = even + self.split_twiddle * odd
        else:
            spec = self.last_plan.execute(as_complex(x, self.dtype))[..., : last // 2 + 1]
        for axis in reversed(range(len(self.shape) - 1)):
            spec = _apply_axis(self.lead_plans[self.shape[axis]], spec, axis)
        return np.ascontiguousarray(spec)


class C2RPlan:
    """Unnormalized inverse from the packed half spectrum to a real signal."""

    def __init__(self, extents: Extents, dtype=np.float64, algorithm="auto"):
        self.extents = extents
        self.shape = extents.dims
        self.packed_shape = (*self.shape[:-1], self.shape[-1] // 2 + 1)
        self.dtype = complex_dtype_for(dtype)
        self.real_dtype = np.empty(0, self.dtype).real.dtype
        *lead, last = self.shape
        self.folded = algorithm != "naive" and last % 2 == 0
        if self.folded:
            half = last // 2
            self.last_plan = make_plan(half, Direction.INVERSE, self.dtype, algorithm)
            # exp(+2*pi*i*k/n) for k in [0, n/2)
            self.merge_twiddle = roots_of_unity(last, Direction.INVERSE, half).astype(self.dtype)
        else:
            self.last_plan = make_plan(last, Direction.INVERSE, self.dtype, algorithm)
        self.lead_plans = _plan_axes(lead, Direction.INVERSE, self.dtype, algorithm)
        self.residue_factor = _RESIDUE_TOL[self.dtype] * total_elements(extents)

    @property
    def nbytes(self) -> int:
        total = self.last_plan.nbytes + sum(p.nbytes for p in self.lead_plans.values())
        if self.folded:
            total += self.merge_twiddle.nbytes
        return total

    def _check_residue(self, imag: np.ndarray, scale: float) -> None:
        tol = self.residue_factor * max(1.0, scale)
        worst = float(np.max(np.abs(imag))) if imag.size else 0.0
        if worst > tol:
            raise ValueError(
                f"spectrum is not Hermitian: imaginary residue {worst:.3g} exceeds {tol:.3g}"
            )

    def execute(self, spec: np.ndarray) -> np.ndarray:
        spec = as_complex(spec, self.dtype)
        if spec.shape != self.packed_shape:
            raise ValueError(
                f"packed spectrum shape {spec.shape} does not match extents "
                f"{self.extents} (expected {self.packed_shape})"
            )
        n_total = total_elements(self.extents)
        scale = float(np.max(np.abs(spec))) / n_total if spec.size else 0.0
        for axis in range(len(self.shape) - 1):
            spec = _apply_axis(self.lead_plans[self.shape[axis]], spec, axis)
        spec = np.ascontiguousarray(spec)
        last = self.shape[-1]
        half = last // 2
        if self.folded:
            # rows of a real signal's spectrum have real DC and Nyquist bins
            self._check_residue(spec[..., [0, half]].imag, scale)
            xk = spec[..., :half]
            xr = np.conj(spec[..., half:0:-1])
            z = (xk + xr) + 1j * self.merge_twiddle * (xk - xr)
            zt = self.last_plan.execute(z)
            out = np.empty(self.shape, dtype=self.real_dtype)
            out[..., 0::2] = zt.real
            out[..., 1::2] = zt.imag
            return out
        full = np.empty(self.shape, dtype=self.dtype)
        full[..., : half + 1] = spec
        full[..., half + 1 :] = np.conj(spec[..., (last - 1) // 2 : 0 : -1])
        signal = self.last_plan.execute(full)
        self._check_residue(signal.imag, scale)
        return np.ascontiguousarray(signal.real)


def fft_nd(x, direction: Direction = Direction.FORWARD) -> np.ndarray:
    x = as_complex(x)
    check_finite(x)
    return NdPlan(x.shape, direction, x.dtype).execute(x)


def r2c_forward(x) -> np.ndarray:
    x = np.asarray(x)
    if np.iscomplexobj(x):
        raise TypeError("r2c_forward expects real input")
    if x.dtype != np.float32:
        x = x.astype(np.float64, copy=False)
    check_finite(x)
    return R2CPlan(Extents(x.shape), x.dtype).execute(x)


def c2r_inverse(spec, original_extents: Extents) -> np.ndarray:
    spec = as_complex(spec)
    check_finite(spec)
    return C2RPlan(original_extents, spec.dtype).execute(spec)


def normalize(volume, element_count: int) -> np.ndarray:
    """Divide every element by ``element_count`` (the time-domain element count)."""
    if element_count < 1:
        raise ValueError(f"element_count must be >= 1, got {element_count}")
    volume = np.asarray(volume)
    if not np.issubdtype(volume.dtype, np.inexact):
        volume = volume.astype(np.float64)
    return volume / volume.dtype.type(element_count)
