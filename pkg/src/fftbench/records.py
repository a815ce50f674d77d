"""Per-run measurement records and the result container."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, fields

from .core import BenchmarkCase

PHASES = (
    "allocate",
    "init_forward",
    "init_inverse",
    "upload",
    "execute_forward",
    "execute_inverse",
    "download",
    "destroy",
)


@dataclass(frozen=True)
class PhaseTimings:
    """Wall-clock milliseconds per lifecycle phase; ``total_ms`` spans allocate..destroy."""

    allocate_ms: float = 0.0
    init_forward_ms: float = 0.0
    init_inverse_ms: float = 0.0
    upload_ms: float = 0.0
    execute_forward_ms: float = 0.0
    execute_inverse_ms: float = 0.0
    download_ms: float = 0.0
    destroy_ms: float = 0.0
    total_ms: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{f.name} must be finite and non-negative, got {value}")

    def phase(self, name: str) -> float:
        return getattr(self, f"{name}_ms")

    @property
    def phase_sum(self) -> float:
        return sum(self.phase(p) for p in PHASES)

    @classmethod
    def from_ns(cls, durations: dict[str, int], total_ns: int) -> "PhaseTimings":
        kwargs = {f"{name}_ms": ns / 1e6 for name, ns in durations.items()}
        return cls(**kwargs, total_ms=total_ns / 1e6)


class Status(enum.Enum):
    OK = "ok"
    VALIDATION_FAILED = "validation_failed"
    PHASE_ERROR = "phase_error"
    UNSUPPORTED = "unsupported"


@dataclass(frozen=True)
class RunRecord:
    case: BenchmarkCase
    run_index: int
    timings: PhaseTimings = field(default_factory=PhaseTimings)
    alloc_bytes: int = 0
    transfer_bytes: int = 0
    plan_bytes: int = 0
    epsilon: float | None = None
    status: Status = Status.OK
    error_phase: str | None = None
    error_message: str | None = None

    @property
    def case_id(self) -> str:
        return self.case.id

    @property
    def ok(self) -> bool:
        return self.status is Status.OK

    @property
    def failed(self) -> bool:
        return self.status in (Status.VALIDATION_FAILED, Status.PHASE_ERROR)


@dataclass
class ResultSet:
    """Suite metadata (string key/value pairs) plus all collected records."""

    metadata: dict[str, str] = field(default_factory=dict)
    records: list[RunRecord] = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    def case_ids(self) -> list[str]:
        seen = {}
        for r in self.records:
            seen.setdefault(r.case_id, None)
        return list(seen)

    def for_case(self, case_id: str) -> list[RunRecord]:
        return [r for r in self.records if r.case_id == case_id]
