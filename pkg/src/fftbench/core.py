"""Shared vocabulary: extents, precisions, transform kinds and size accounting."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

_MAX_COUNT = 2**64 - 1
_SMOOTH_PRIMES = (2, 3, 5, 7)


class Precision(enum.Enum):
    SINGLE = "float"
    DOUBLE = "double"

    @property
    def real_dtype(self) -> np.dtype:
        return np.dtype(np.float32 if self is Precision.SINGLE else np.float64)

    @property
    def complex_dtype(self) -> np.dtype:
        return np.dtype(np.complex64 if self is Precision.SINGLE else np.complex128)

    @property
    def real_bytes(self) -> int:
        return self.real_dtype.itemsize

    @classmethod
    def from_dtype(cls, dtype) -> "Precision":
        dtype = np.dtype(dtype)
        if dtype in (np.float32, np.complex64):
            return cls.SINGLE
        return cls.DOUBLE


class TransformKind(enum.Enum):
    REAL_TO_COMPLEX = "Real"
    COMPLEX_TO_COMPLEX = "Complex"


class MemoryMode(enum.Enum):
    IN_PLACE = "Inplace"
    OUT_OF_PLACE = "Outplace"


class Direction(enum.Enum):
    FORWARD = -1
    INVERSE = 1

    @property
    def sign(self) -> int:
        """Sign of the exponent in exp(sign * 2*pi*i*j*k/n)."""
        return self.value


class RadixClass(enum.Enum):
    POWEROF2 = "powerof2"
    RADIX357 = "radix357"
    ODDSHAPE = "oddshape"


class PlanEffort(enum.Enum):
    NONE = "none"
    ESTIMATE = "estimate"
    MEASURE = "measure"


def _checked_product(values) -> int:
    total = 1
    for v in values:
        total *= v
        if total > _MAX_COUNT:
            raise OverflowError("element count exceeds a 64-bit unsigned count")
    return total


@dataclass(frozen=True)
class Extents:
    """Transform shape of rank 1 to 3, slowest-varying length first.

    Rank-1 extents need a length of at least 2. Higher ranks must not carry
    degenerate unit lengths; pass the lower rank instead.
    """

    dims: tuple[int, ...]

    def __init__(self, *dims):
        if len(dims) == 1 and not isinstance(dims[0], (int, np.integer)):
            dims = tuple(dims[0])
        dims = tuple(int(d) for d in dims)
        object.__setattr__(self, "dims", dims)
        if not 1 <= len(dims) <= 3:
            raise ValueError(f"rank must be 1, 2 or 3, got {len(dims)}")
        if any(d < 1 for d in dims):
            raise ValueError(f"lengths must be positive: {dims}")
        if max(dims) < 2:
            raise ValueError(f"at least one length must be >= 2: {dims}")
        if len(dims) > 1 and min(dims) < 2:
            raise ValueError(f"unit length in rank-{len(dims)} extents {dims}; use a lower rank")
        _checked_product(dims)

    @classmethod
    def parse(cls, text: str) -> "Extents":
        """Parse ``"128x128"`` style text. Case-sensitive, no whitespace."""
        parts = text.split("x")
        if not all(p.isascii() and p.isdigit() for p in parts):
            raise ValueError(f"malformed extents {text!r}")
        return cls(tuple(int(p) for p in parts))

    @property
    def rank(self) -> int:
        return len(self.dims)

    def __str__(self) -> str:
        return "x".join(str(d) for d in self.dims)

    def __iter__(self):
        return iter(self.dims)

    def __len__(self):
        return len(self.dims)


def total_elements(extents: Extents) -> int:
    return _checked_product(extents.dims)


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def _is_smooth(n: int) -> bool:
    for p in _SMOOTH_PRIMES:
        while n % p == 0:
            n //= p
    return n == 1


def classify_radix(extents: Extents) -> RadixClass:
    if all(_is_power_of_two(d) for d in extents.dims):
        return RadixClass.POWEROF2
    if all(_is_smooth(d) for d in extents.dims):
        return RadixClass.RADIX357
    return RadixClass.ODDSHAPE


def packed_extents(extents: Extents) -> tuple[int, ...]:
    """Shape of the Hermitian-packed spectrum of a real signal."""
    *lead, last = extents.dims
    return (*lead, last // 2 + 1)


def signal_bytes(
    extents: Extents, precision: Precision, kind: TransformKind, mode: MemoryMode
) -> tuple[int, int]:
    """Return ``(input_bytes, output_bytes)`` for one transform.

    In-place transforms report a single padded buffer of ``max(in, out)``
    bytes as input and zero output bytes.
    """
    real = precision.real_bytes
    cplx = 2 * real
    n = total_elements(extents)
    if kind is TransformKind.COMPLEX_TO_COMPLEX:
        in_bytes = out_bytes = n * cplx
    else:
        in_bytes = n * real
        out_bytes = _checked_product(packed_extents(extents)) * cplx
    if in_bytes > _MAX_COUNT or out_bytes > _MAX_COUNT:
        raise OverflowError("byte count exceeds a 64-bit unsigned count")
    if mode is MemoryMode.IN_PLACE:
        return max(in_bytes, out_bytes), 0
    return in_bytes, out_bytes


@dataclass(frozen=True)
class BenchmarkCase:
    """One leaf of the benchmark tree.

    Identity (equality, hashing, ``id``) ignores the plan effort hint.
    """

    client_title: str
    precision: Precision
    extents: Extents
    kind: TransformKind
    mode: MemoryMode
    plan_effort: PlanEffort = field(default=PlanEffort.ESTIMATE, compare=False)

    @property
    def kind_mode(self) -> str:
        return f"{self.mode.value}_{self.kind.value}"

    @property
    def id(self) -> str:
        return f"{self.client_title}/{self.precision.value}/{self.extents}/{self.kind_mode}"

    @property
    def radix_class(self) -> RadixClass:
        return classify_radix(self.extents)

    @property
    def elements(self) -> int:
        return total_elements(self.extents)

    def signal_bytes(self) -> tuple[int, int]:
        return signal_bytes(self.extents, self.precision, self.kind, self.mode)

    def __str__(self) -> str:
        return self.id


def parse_kind_mode(text: str) -> tuple[TransformKind, MemoryMode]:
    mode_text, sep, kind_text = text.partition("_")
    if not sep:
        raise ValueError(f"malformed kind/mode {text!r}")
    return TransformKind(kind_text), MemoryMode(mode_text)


def next_power_of_two(n: int) -> int:
    return 1 << (n - 1).bit_length() if n > 1 else 1
