"""FFT client lifecycle, contexts and the two built-in host clients.

Adapters for external FFT libraries subclass :class:`FftClient` and fill in
the underscore hooks. The public lifecycle methods enforce the legal call
order::

    construct -> allocate -> init_forward -> [init_inverse if plans_upfront]
      -> upload -> execute_forward -> [init_inverse otherwise]
      -> execute_inverse -> download -> destroy -> destruct
"""

from __future__ import annotations

import os
import platform
import time
from typing import Callable, ClassVar

import numpy as np

from .core import BenchmarkCase, Direction, TransformKind, packed_extents
from .records import PHASES, PhaseTimings
from .reference_fft import C2RPlan, NdPlan, R2CPlan

NAIVE_MAX_ELEMENTS = 2**16


class OrderingError(RuntimeError):
    """A lifecycle method was called out of the legal order."""


class UnsupportedCaseError(ValueError):
    """The client cannot run the requested benchmark case."""


class PhaseError(RuntimeError):
    """A client call failed; ``phase`` names the lifecycle step."""

    def __init__(self, phase: str, message: str, timings: PhaseTimings | None = None):
        super().__init__(f"{phase}: {message}")
        self.phase = phase
        self.message = message
        self.timings = timings if timings is not None else PhaseTimings()


def _lifecycle(plans_upfront: bool) -> tuple[str, ...]:
    if plans_upfront:
        middle = ("init_forward", "init_inverse", "upload", "execute_forward")
    else:
        middle = ("init_forward", "upload", "execute_forward", "init_inverse")
    return ("allocate", *middle, "execute_inverse", "download", "destroy")


class FftClient:
    """Base class for FFT backends driven by the benchmark harness."""

    title: ClassVar[str] = "FftClient"
    normalizes_inverse: ClassVar[bool] = False
    plans_upfront: ClassVar[bool] = False
    #: optional clock returning nanoseconds; the harness wall clock is used when None
    timer: ClassVar[Callable[[], int] | None] = None

    @classmethod
    def supports(cls, case: BenchmarkCase) -> bool:
        return True

    def __init__(self, case: BenchmarkCase):
        if not self.supports(case):
            raise UnsupportedCaseError(f"{self.title} does not support {case.id}")
        self.case = case
        self._order = _lifecycle(self.plans_upfront)
        self._position = 0
        self._allocated = False
        self._destructed = False

    # -- order bookkeeping -------------------------------------------------

    @property
    def state(self) -> str:
        if self._destructed:
            return "destructed"
        if self._position == 0:
            return "constructed"
        return self._order[self._position - 1]

    def _step(self, phase: str, hook, *args):
        if self._destructed:
            raise OrderingError(f"{phase} called after destruct")
        expected = self._order[self._position] if self._position < len(self._order) else None
        if phase != expected:
            raise OrderingError(f"{phase} called in state {self.state!r}; expected {expected}")
        result = hook(*args)
        self._position += 1
        return result

    def _require_allocated(self, query: str):
        if not self._allocated:
            raise OrderingError(f"{query} is only valid after allocate")

    # -- lifecycle ---------------------------------------------------------

    def allocate(self):
        self._step("allocate", self._allocate)
        self._allocated = True

    def init_forward(self):
        self._step("init_forward", self._init_forward)

    def init_inverse(self):
        self._step("init_inverse", self._init_inverse)

    def upload(self, host_input: np.ndarray):
        self._step("upload", self._upload, host_input)

    def execute_forward(self):
        self._step("execute_forward", self._execute_forward)

    def execute_inverse(self):
        self._step("execute_inverse", self._execute_inverse)

    def download(self, host_output: np.ndarray) -> np.ndarray:
        return self._step("download", self._download, host_output)

    def destroy(self):
        if self._position > self._order.index("destroy") and not self._destructed:
            return
        self._step("destroy", self._destroy)

    def destruct(self):
        if self._destructed:
            return
        if self._position not in (0, len(self._order)):
            raise OrderingError(f"destruct called in state {self.state!r}; destroy first")
        self._destruct()
        self._destructed = True

    def get_alloc_size(self) -> int:
        self._require_allocated("get_alloc_size")
        return self._alloc_size()

    def get_transfer_size(self) -> int:
        self._require_allocated("get_transfer_size")
        return self._transfer_size()

    def get_plan_size(self) -> int:
        self._require_allocated("get_plan_size")
        return self._plan_size()

    # -- hooks -------------------------------------------------------------

    def _allocate(self):
        raise NotImplementedError

    def _init_forward(self):
        raise NotImplementedError

    def _init_inverse(self):
        raise NotImplementedError

    def _upload(self, host_input):
        raise NotImplementedError

    def _execute_forward(self):
        raise NotImplementedError

    def _execute_inverse(self):
        raise NotImplementedError

    def _download(self, host_output):
        raise NotImplementedError

    def _destroy(self):
        raise NotImplementedError

    def _destruct(self):
        pass

    def _alloc_size(self) -> int:
        return 0

    def _transfer_size(self) -> int:
        return 0

    def _plan_size(self) -> int:
        return 0


class HostClient(FftClient):
    """In-memory client backed by the reference kernels.

    All buffer and plan work happens in allocate/init/destroy; construct and
    destruct are trivial. In-place cases share one byte buffer between the
    signal and the spectrum.
    """

    title = "HostClient"
    algorithm: ClassVar[str] = "auto"

    def __init__(self, case: BenchmarkCase):
        super().__init__(case)
        self._real = case.kind is TransformKind.REAL_TO_COMPLEX
        precision = case.precision
        self._signal_dtype = precision.real_dtype if self._real else precision.complex_dtype
        self._spectrum_shape = packed_extents(case.extents) if self._real else case.extents.dims
        self._buffers: list[np.ndarray] = []
        self._signal = self._spectrum = None
        self._forward = self._inverse = None
        self._plan_bytes = 0

    def _allocate(self):
        in_bytes, out_bytes = self.case.signal_bytes()
        self._buffers = [np.empty(b, dtype=np.uint8) for b in (in_bytes, out_bytes) if b]
        source = self._buffers[0]
        target = self._buffers[-1]
        shape = self.case.extents.dims
        n = self.case.elements
        self._signal = source[: n * self._signal_dtype.itemsize].view(self._signal_dtype).reshape(shape)
        cdtype = self.case.precision.complex_dtype
        n_spec = int(np.prod(self._spectrum_shape))
        self._spectrum = target[: n_spec * cdtype.itemsize].view(cdtype).reshape(self._spectrum_shape)

    def _build(self, direction: Direction):
        case = self.case
        dtype = case.precision.complex_dtype
        if not self._real:
            plan = NdPlan(case.extents.dims, direction, dtype, self.algorithm)
        elif direction is Direction.FORWARD:
            plan = R2CPlan(case.extents, dtype, self.algorithm)
        else:
            plan = C2RPlan(case.extents, dtype, self.algorithm)
        self._plan_bytes += plan.nbytes
        return plan

    def _init_forward(self):
        self._forward = self._build(Direction.FORWARD)

    def _init_inverse(self):
        self._inverse = self._build(Direction.INVERSE)

    def _upload(self, host_input):
        host_input = np.asarray(host_input)
        if host_input.size != self._signal.size:
            raise ValueError(f"upload of {host_input.size} elements into {self._signal.size}")
        np.copyto(self._signal, host_input.reshape(self._signal.shape), casting="same_kind")

    def _execute_forward(self):
        np.copyto(self._spectrum, self._forward.execute(self._signal))

    def _execute_inverse(self):
        np.copyto(self._signal, self._inverse.execute(self._spectrum), casting="same_kind")

    def _download(self, host_output):
        np.copyto(host_output, self._signal.reshape(host_output.shape), casting="same_kind")
        return host_output

    def _destroy(self):
        self._buffers = []
        self._signal = self._spectrum = None
        self._forward = self._inverse = None

    def _alloc_size(self) -> int:
        return sum(self.case.signal_bytes())

    def _transfer_size(self) -> int:
        return self.case.elements * self._signal_dtype.itemsize

    def _plan_size(self) -> int:
        return self._plan_bytes


class RefFFTClient(HostClient):
    """Fast reference FFT: Stockham, mixed radix or Bluestein per axis length."""

    title = "RefFFT"
    algorithm = "auto"


class NaiveDFTClient(HostClient):
    """Direct O(n^2) DFT per axis. Refuses more than 2**16 elements."""

    title = "NaiveDFT"
    algorithm = "naive"

    @classmethod
    def supports(cls, case: BenchmarkCase) -> bool:
        return case.elements <= NAIVE_MAX_ELEMENTS


BUILTIN_CLIENTS: dict[str, type[FftClient]] = {
    RefFFTClient.title: RefFFTClient,
    NaiveDFTClient.title: NaiveDFTClient,
}


def make_builtin_client(title: str, case: BenchmarkCase) -> FftClient:
    try:
        cls = BUILTIN_CLIENTS[title]
    except KeyError:
        raise ValueError(
            f"unknown client {title!r}; choose from {sorted(BUILTIN_CLIENTS)}"
        ) from None
    return cls(case)


def builtin_factory(case: BenchmarkCase) -> FftClient:
    """Client factory keyed on ``case.client_title``."""
    return make_builtin_client(case.client_title, case)


def execute_roundtrip(
    client: FftClient, host_input: np.ndarray, host_output: np.ndarray | None = None
) -> tuple[np.ndarray, PhaseTimings]:
    """Drive one forward/inverse round trip and time every phase.

    Failures raise :class:`PhaseError` naming the failing phase; no later
    phase is invoked.
    """
    if host_output is None:
        host_output = np.empty_like(host_input)
    clock = client.timer or time.perf_counter_ns
    calls = {
        "allocate": client.allocate,
        "init_forward": client.init_forward,
        "init_inverse": client.init_inverse,
        "upload": lambda: client.upload(host_input),
        "execute_forward": client.execute_forward,
        "execute_inverse": client.execute_inverse,
        "download": lambda: client.download(host_output),
        "destroy": client.destroy,
    }
    durations = dict.fromkeys(PHASES, 0)
    start = clock()
    for phase in _lifecycle(client.plans_upfront):
        t0 = clock()
        try:
            calls[phase]()
        except Exception as exc:
            durations[phase] = clock() - t0
            partial = PhaseTimings.from_ns(durations, clock() - start)
            raise PhaseError(phase, f"{type(exc).__name__}: {exc}", partial) from exc
        durations[phase] = clock() - t0
    total = clock() - start
    try:
        client.destruct()
    except Exception as exc:
        raise PhaseError("destruct", f"{type(exc).__name__}: {exc}") from exc
    return host_output, PhaseTimings.from_ns(durations, total)


class Context:
    """Once-per-suite device and library setup."""

    def create(self):
        pass

    def destroy(self):
        pass

    def title(self) -> str:
        return type(self).__name__

    def device_description(self) -> str:
        return ""


class HostContext(Context):
    def __init__(self, device: str = "cpu"):
        self.device = device

    def title(self) -> str:
        return "host"

    def device_description(self) -> str:
        cpu = platform.processor() or platform.machine()
        return f"{self.device}: {cpu}, {os.cpu_count()} logical cores, {platform.system()}"
