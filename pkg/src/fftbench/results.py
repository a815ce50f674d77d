"""CSV persistence of run records and the downstream statistics."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from os import PathLike
from typing import Iterable, Sequence

import numpy as np

from .core import BenchmarkCase, Extents, MemoryMode, Precision, TransformKind, classify_radix
from .records import PHASES, PhaseTimings, ResultSet, RunRecord, Status

SCHEMA_VERSION = "1"

COLUMNS = (
    "library",
    "case_id",
    "rank",
    "extents",
    "radix_class",
    "precision",
    "kind",
    "mode",
    "run_index",
    "status",
    "epsilon",
    "alloc_bytes",
    "transfer_bytes",
    "plan_bytes",
    *(f"{p}_ms" for p in PHASES),
    "total_ms",
)

TIMING_FIELDS = (*(f"{p}_ms" for p in PHASES), "total_ms")


class CsvFormatError(ValueError):
    def __init__(self, path, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.line = line


def _real(x: float) -> str:
    return format(x, ".9g")


def _status_text(record: RunRecord) -> str:
    if record.status is Status.PHASE_ERROR:
        return f"phase_error:{record.error_phase}:{record.error_message or ''}"
    return record.status.value


def _row(record: RunRecord) -> list[str]:
    case = record.case
    t = record.timings
    return [
        case.client_title,
        case.id,
        str(case.extents.rank),
        str(case.extents),
        case.radix_class.value,
        case.precision.value,
        case.kind.value,
        case.mode.value,
        str(record.run_index),
        _status_text(record),
        "" if record.epsilon is None else _real(record.epsilon),
        str(record.alloc_bytes),
        str(record.transfer_bytes),
        str(record.plan_bytes),
        *(_real(getattr(t, name)) for name in TIMING_FIELDS),
    ]


def write_csv(results: ResultSet, path: str | PathLike) -> None:
    """Write ``# key=value`` metadata lines, the header, then one row per record."""
    metadata = {"schema": SCHEMA_VERSION, **results.metadata}
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for key, value in metadata.items():
            fh.write(f"# {key}={_one_line(value)}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(COLUMNS)
        for record in results.records:
            writer.writerow(_row(record))


def _one_line(value) -> str:
    return str(value).replace("\r", " ").replace("\n", " ")


def _parse_record(row: list[str], path, line: int) -> RunRecord:
    if len(row) != len(COLUMNS):
        raise CsvFormatError(path, line, f"expected {len(COLUMNS)} columns, got {len(row)}")
    v = dict(zip(COLUMNS, row))
    try:
        case = BenchmarkCase(
            v["library"],
            Precision(v["precision"]),
            Extents.parse(v["extents"]),
            TransformKind(v["kind"]),
            MemoryMode(v["mode"]),
        )
        if case.id != v["case_id"]:
            raise ValueError(f"case_id {v['case_id']!r} disagrees with fields ({case.id!r})")
        if int(v["rank"]) != case.extents.rank:
            raise ValueError(f"rank {v['rank']} disagrees with extents {case.extents}")
        if classify_radix(case.extents).value != v["radix_class"]:
            raise ValueError(f"radix_class {v['radix_class']!r} disagrees with extents")
        status_text = v["status"]
        error_phase = error_message = None
        if status_text.startswith("phase_error:"):
            _, error_phase, error_message = status_text.split(":", 2)
            status = Status.PHASE_ERROR
        else:
            status = Status(status_text)
        timings = PhaseTimings(**{name: float(v[name]) for name in TIMING_FIELDS})
        return RunRecord(
            case=case,
            run_index=int(v["run_index"]),
            timings=timings,
            alloc_bytes=int(v["alloc_bytes"]),
            transfer_bytes=int(v["transfer_bytes"]),
            plan_bytes=int(v["plan_bytes"]),
            epsilon=float(v["epsilon"]) if v["epsilon"] else None,
            status=status,
            error_phase=error_phase,
            error_message=error_message,
        )
    except ValueError as exc:
        raise CsvFormatError(path, line, str(exc)) from None


def read_csv(path: str | PathLike) -> ResultSet:
    metadata: dict[str, str] = {}
    records: list[RunRecord] = []
    with open(path, encoding="utf-8", newline="") as fh:
        lines = fh.read().splitlines()
    body_start = 0
    for body_start, text in enumerate(lines):
        if not text.startswith("#"):
            break
        key, sep, value = text[1:].strip().partition("=")
        if not sep:
            raise CsvFormatError(path, body_start + 1, f"malformed metadata line {text!r}")
        metadata[key] = value
    else:
        raise CsvFormatError(path, len(lines) + 1, "missing header row")
    reader = csv.reader(lines[body_start:])
    header = next(reader)
    if tuple(header) != COLUMNS:
        unknown = [c for c in header if c not in COLUMNS]
        detail = f"unknown columns {unknown}" if unknown else "column set or order differs"
        raise CsvFormatError(path, body_start + 1, f"header mismatch: {detail}")
    for offset, row in enumerate(reader, start=body_start + 2):
        if not row:
            continue
        records.append(_parse_record(row, path, offset))
    return ResultSet(metadata=metadata, records=records)


@dataclass(frozen=True)
class PhaseStats:
    mean_ms: float
    stddev_ms: float
    min_ms: float
    max_ms: float


@dataclass
class CaseStats:
    """Per-phase statistics over the ok records of one case.

    ``phases`` is empty when no record succeeded. ``single_sample`` flags a
    standard deviation reported as 0 because only one sample exists.
    """

    case: BenchmarkCase
    n_ok: int
    n_failed: int
    phases: dict[str, PhaseStats] = field(default_factory=dict)
    single_sample: bool = False

    def mean(self, name: str) -> float:
        return self.phases[name.removesuffix("_ms")].mean_ms


def aggregate(results: ResultSet | Iterable[RunRecord]) -> dict[str, CaseStats]:
    records = results.records if isinstance(results, ResultSet) else list(results)
    groups: dict[str, list[RunRecord]] = {}
    for r in records:
        groups.setdefault(r.case_id, []).append(r)
    stats = {}
    for case_id in sorted(groups):
        group = groups[case_id]
        ok = [r for r in group if r.ok]
        cs = CaseStats(group[0].case, len(ok), sum(r.failed for r in group))
        if ok:
            # sort so the floating-point sums do not depend on record order
            for name in (*PHASES, "total"):
                values = np.sort([r.timings.phase(name) for r in ok])
                std = float(np.std(values, ddof=1)) if len(values) > 1 else 0.0
                cs.phases[name] = PhaseStats(
                    float(np.mean(values)), std, float(values[0]), float(values[-1])
                )
            cs.single_sample = len(ok) == 1
        stats[case_id] = cs
    return stats


def planning_fraction(stats: CaseStats) -> float:
    """Share of the mean total time spent creating the forward and inverse plans."""
    if not stats.phases:
        raise ValueError(f"no successful runs for {stats.case.id}")
    total = stats.mean("total")
    if total <= 0:
        raise ValueError("mean total time is zero")
    return (stats.mean("init_forward") + stats.mean("init_inverse")) / total


@dataclass(frozen=True)
class SizeSeries:
    """(size, mean time in ms) points with strictly increasing size."""

    sizes: tuple[int, ...]
    values: tuple[float, ...]

    def __init__(self, points: Iterable[tuple[int, float]]):
        points = list(points)
        sizes = tuple(int(s) for s, _ in points)
        values = tuple(float(v) for _, v in points)
        if any(b <= a for a, b in zip(sizes, sizes[1:])):
            raise ValueError("sizes must be strictly increasing")
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.sizes)

    def __iter__(self):
        return iter(zip(self.sizes, self.values))


def size_series(
    stats: dict[str, CaseStats],
    client_title: str,
    precision: Precision,
    kind: TransformKind,
    mode: MemoryMode,
    phase: str = "total",
    size: str = "bytes",
) -> SizeSeries:
    """Collect mean ``phase`` times of matching cases, keyed by input bytes or elements."""
    points = {}
    for cs in stats.values():
        c = cs.case
        if (c.client_title, c.precision, c.kind, c.mode) != (client_title, precision, kind, mode):
            continue
        if not cs.phases:
            continue
        key = c.signal_bytes()[0] if size == "bytes" else c.elements
        points[key] = cs.mean(phase)
    return SizeSeries(sorted(points.items()))


def crossover(a: SizeSeries, b: SizeSeries) -> int | None:
    """First size where ``a`` overtakes ``b`` (a > b after a < b).

    The first strict ordering must be a < b, otherwise the result is None;
    this keeps ``crossover(a, b)`` and ``crossover(b, a)`` mutually exclusive.
    Ties are skipped: they neither cross nor reset the last strict ordering.
    """
    if a.sizes != b.sizes:
        raise ValueError("series are on different size grids")
    previous = None
    for s, va, vb in zip(a.sizes, a.values, b.values):
        if va == vb:
            continue
        below = va < vb
        if previous is None and not below:
            return None
        if previous and not below:
            return s
        previous = below
    return None


def fit_scaling(series: SizeSeries) -> float:
    """Least-squares slope of log(time) against log(size)."""
    if len(series) < 4:
        raise ValueError(f"need at least 4 points, got {len(series)}")
    if any(v <= 0 or not math.isfinite(v) for v in series.values):
        raise ValueError("all metrics must be positive and finite")
    x = np.log(np.asarray(series.sizes, dtype=np.float64))
    y = np.log(np.asarray(series.values, dtype=np.float64))
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def records_equal(a: RunRecord, b: RunRecord) -> bool:
    """Field-wise equality with reals compared at 9 significant digits."""
    def same(x, y):
        if x is None or y is None:
            return x is y
        return _real(x) == _real(y)

    return (
        a.case == b.case
        and a.run_index == b.run_index
        and (a.alloc_bytes, a.transfer_bytes, a.plan_bytes)
        == (b.alloc_bytes, b.transfer_bytes, b.plan_bytes)
        and a.status is b.status
        and a.error_phase == b.error_phase
        and (a.error_message or "") == (b.error_message or "")
        and same(a.epsilon, b.epsilon)
        and all(same(getattr(a.timings, f), getattr(b.timings, f)) for f in TIMING_FIELDS)
    )


def summarize(stats: dict[str, CaseStats]) -> Sequence[str]:
    """Human-readable per-case lines (mean +- sample stddev of total time)."""
    lines = []
    for case_id, cs in stats.items():
        if not cs.phases:
            lines.append(f"{case_id}: no successful runs ({cs.n_failed} failed)")
            continue
        total = cs.phases["total"]
        lines.append(
            f"{case_id}: total {total.mean_ms:.4g} +- {total.stddev_ms:.2g} ms, "
            f"forward {cs.mean('execute_forward'):.4g} ms, n_ok={cs.n_ok}"
        )
    return lines
