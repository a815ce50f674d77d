"""Benchmark tree construction, repetition protocol and round-trip validation."""

from __future__ import annotations

import gc
import itertools
import logging
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Callable, Iterable, Sequence

import numpy as np

from .clients import (
    Context,
    FftClient,
    HostContext,
    PhaseError,
    UnsupportedCaseError,
    builtin_factory,
    execute_roundtrip,
)
from .core import (
    BenchmarkCase,
    Extents,
    MemoryMode,
    PlanEffort,
    Precision,
    TransformKind,
)
from .records import PhaseTimings, ResultSet, RunRecord, Status
from .reference_fft import normalize

logger = logging.getLogger(__name__)

ClientFactory = Callable[[BenchmarkCase], FftClient]


@dataclass(frozen=True)
class RunSettings:
    warmups: int = 1
    repetitions: int = 10
    error_bound: float = 1e-5
    continue_on_error: bool = True

    def __post_init__(self):
        if self.warmups < 0:
            raise ValueError(f"warmups must be >= 0, got {self.warmups}")
        if self.repetitions < 1:
            raise ValueError(f"repetitions must be >= 1, got {self.repetitions}")
        if not self.error_bound > 0:
            raise ValueError(f"error_bound must be > 0, got {self.error_bound}")


@dataclass(frozen=True)
class ValidationResult:
    epsilon: float
    passed: bool


def fill_seesaw(buffer: np.ndarray, period: int = 32) -> np.ndarray:
    """Fill ``buffer`` in place with ``(i % period) / period`` in flat order.

    Complex buffers get the ramp in the real part and zero imaginary part.
    """
    if period < 2:
        raise ValueError(f"period must be >= 2, got {period}")
    ramp = (np.arange(buffer.size) % period) / period
    buffer.reshape(-1)[...] = ramp
    return buffer


def validate(input, roundtrip, bound: float) -> ValidationResult:
    """Root of the summed squared difference over ``n - 1``.

    No mean is subtracted, so a constant offset counts as error.
    """
    a = np.asarray(input).reshape(-1)
    b = np.asarray(roundtrip).reshape(-1)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.size} vs {b.size}")
    if a.size < 2:
        raise ValueError("validation needs at least two elements")
    diff = a.astype(np.complex128) - b.astype(np.complex128)
    epsilon = float(np.sqrt(np.sum(diff.real**2 + diff.imag**2) / (a.size - 1)))
    return ValidationResult(epsilon, epsilon <= bound)


def build_benchmark_tree(
    clients: Sequence[str],
    extents_list: Sequence[Extents],
    precisions: Sequence[Precision] = tuple(Precision),
    kinds: Sequence[TransformKind] = tuple(TransformKind),
    modes: Sequence[MemoryMode] = tuple(MemoryMode),
    plan_effort: PlanEffort = PlanEffort.ESTIMATE,
) -> list[BenchmarkCase]:
    """Cartesian product ordered client, precision, extents, kind, mode.

    Cases a client cannot run stay in the tree and are recorded as unsupported.
    """
    if not extents_list:
        raise ValueError("extents list is empty")
    for name, axis in (("clients", clients), ("precisions", precisions),
                       ("kinds", kinds), ("modes", modes)):
        if not axis:
            raise ValueError(f"{name} list is empty")
    return [
        BenchmarkCase(title, precision, extents, kind, mode, plan_effort)
        for title, precision, extents, kind, mode in itertools.product(
            clients, precisions, extents_list, kinds, modes
        )
    ]


def _host_input(case: BenchmarkCase) -> np.ndarray:
    dtype = (
        case.precision.real_dtype
        if case.kind is TransformKind.REAL_TO_COMPLEX
        else case.precision.complex_dtype
    )
    buf = np.empty(case.extents.dims, dtype=dtype)
    return fill_seesaw(buf)


def _sizes(client: FftClient) -> tuple[int, int, int]:
    try:
        return client.get_alloc_size(), client.get_transfer_size(), client.get_plan_size()
    except Exception:
        return 0, 0, 0


def _timed_roundtrip(client: FftClient, work: np.ndarray):
    gc.collect()
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        return execute_roundtrip(client, work)
    finally:
        if was_enabled:
            gc.enable()


def run_case(
    case: BenchmarkCase,
    factory: ClientFactory = builtin_factory,
    settings: RunSettings = RunSettings(),
) -> list[RunRecord]:
    """Run warmups, then ``settings.repetitions`` recorded round trips.

    Every repetition gets a fresh client and a fresh copy of the see-saw
    input, and is validated. A phase error ends the case.
    """
    pristine = _host_input(case)
    records: list[RunRecord] = []
    n = case.elements
    for index in range(-settings.warmups, settings.repetitions):
        try:
            client = factory(case)
        except UnsupportedCaseError as exc:
            logger.info("%s unsupported: %s", case.id, exc)
            return [RunRecord(case, 0, status=Status.UNSUPPORTED, error_message=str(exc))]
        except Exception as exc:
            logger.warning("%s: client construction failed: %s", case.id, exc)
            return records + [
                RunRecord(
                    case, max(index, 0), status=Status.PHASE_ERROR,
                    error_phase="construct", error_message=f"{type(exc).__name__}: {exc}",
                )
            ]
        work = pristine.copy()
        try:
            output, timings = _timed_roundtrip(client, work)
        except PhaseError as exc:
            logger.warning("%s run %d failed in %s: %s", case.id, index, exc.phase, exc.message)
            alloc, transfer, plan = _sizes(client)
            return records + [
                RunRecord(
                    case, max(index, 0), exc.timings, alloc, transfer, plan,
                    status=Status.PHASE_ERROR, error_phase=exc.phase,
                    error_message=exc.message,
                )
            ]
        if index < 0:
            continue
        if not client.normalizes_inverse:
            output = normalize(output, n)
        check = validate(pristine, output, settings.error_bound)
        alloc, transfer, plan = _sizes(client)
        status = Status.OK if check.passed else Status.VALIDATION_FAILED
        if not check.passed:
            logger.warning(
                "%s run %d: epsilon %.3g exceeds %.3g", case.id, index, check.epsilon,
                settings.error_bound,
            )
        records.append(
            RunRecord(case, index, timings, alloc, transfer, plan, check.epsilon, status)
        )
    return records


def run_suite(
    tree: Iterable[BenchmarkCase],
    factory: ClientFactory = builtin_factory,
    settings: RunSettings = RunSettings(),
    context: Context | None = None,
) -> ResultSet:
    """Run every case in order under one context.

    Failed cases are recorded and the suite moves on, unless
    ``continue_on_error`` is off, in which case it stops after the first
    failing case.
    """
    context = context if context is not None else HostContext()
    t0 = time.perf_counter_ns()
    context.create()
    create_ms = (time.perf_counter_ns() - t0) / 1e6

    results = ResultSet(
        metadata={
            "schema": "1",
            "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "context": context.title(),
            "device": context.device_description(),
            "warmups": str(settings.warmups),
            "repetitions": str(settings.repetitions),
            "error_bound": repr(settings.error_bound),
            "continue_on_error": str(settings.continue_on_error).lower(),
            "context_create_ms": f"{create_ms:.9g}",
        }
    )
    try:
        for case in tree:
            logger.info("running %s", case.id)
            records = run_case(case, factory, settings)
            results.records.extend(records)
            if not settings.continue_on_error and any(r.failed for r in records):
                logger.error("stopping after failure in %s", case.id)
                results.metadata["aborted_at"] = case.id
                break
    finally:
        t0 = time.perf_counter_ns()
        context.destroy()
        results.metadata["context_destroy_ms"] = f"{(time.perf_counter_ns() - t0) / 1e6:.9g}"
    return results


__all__ = [
    "BenchmarkCase",
    "PhaseTimings",
    "RunRecord",
    "RunSettings",
    "Status",
    "ValidationResult",
    "build_benchmark_tree",
    "fill_seesaw",
    "run_case",
    "run_suite",
    "validate",
]
