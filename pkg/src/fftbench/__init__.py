"""Vendor-agnostic FFT benchmark suite with phase-resolved timing."""

from .clients import (
    BUILTIN_CLIENTS,
    Context,
    FftClient,
    HostContext,
    NaiveDFTClient,
    OrderingError,
    PhaseError,
    RefFFTClient,
    UnsupportedCaseError,
    execute_roundtrip,
    make_builtin_client,
)
from .core import (
    BenchmarkCase,
    Direction,
    Extents,
    MemoryMode,
    PlanEffort,
    Precision,
    RadixClass,
    TransformKind,
    classify_radix,
    signal_bytes,
    total_elements,
)
from .harness import RunSettings, build_benchmark_tree, fill_seesaw, run_case, run_suite, validate
from .records import PhaseTimings, ResultSet, RunRecord, Status
from .results import aggregate, crossover, fit_scaling, planning_fraction, read_csv, write_csv

__version__ = "0.1.0"
