"""Command-line front end.

Example::

    fftbench -e 128x128 1024 -r '*/float/*/Inplace_Real' -d cpu
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .clients import BUILTIN_CLIENTS, FftClient, HostContext, UnsupportedCaseError
from .core import BenchmarkCase, Extents, MemoryMode, Precision, TransformKind
from .harness import RunSettings, build_benchmark_tree, run_suite
from .records import Status
from .results import aggregate, summarize, write_csv

logger = logging.getLogger("fftbench")

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2

KIND_MODES = tuple(f"{m.value}_{k.value}" for m in MemoryMode for k in TransformKind)
DEFAULT_EXTENTS = (
    *(Extents(2**p) for p in range(5, 13)),
    Extents(32, 32, 32),
    Extents(128, 128, 128),
)


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class FilterPattern:
    """``title/precision/extents/kind_mode`` where any field may be ``*``."""

    title: str
    precision: str
    extents: str
    kind_mode: str

    @classmethod
    def parse(cls, text: str) -> "FilterPattern":
        fields = text.split("/")
        if len(fields) != 4 or not all(fields):
            raise ValueError(f"pattern {text!r} must have four '/'-separated fields")
        title, precision, extents, kind_mode = fields
        if precision not in ("*", *(p.value for p in Precision)):
            raise ValueError(f"pattern {text!r}: precision must be float, double or *")
        if extents != "*":
            Extents.parse(extents)
        if kind_mode not in ("*", *KIND_MODES):
            raise ValueError(
                f"pattern {text!r}: kind must be * or one of {', '.join(KIND_MODES)}"
            )
        return cls(title, precision, extents, kind_mode)

    def __str__(self) -> str:
        return f"{self.title}/{self.precision}/{self.extents}/{self.kind_mode}"


def match_filter(pattern: FilterPattern, case: BenchmarkCase) -> bool:
    rendered = (case.client_title, case.precision.value, str(case.extents), case.kind_mode)
    wanted = (pattern.title, pattern.precision, pattern.extents, pattern.kind_mode)
    return all(w == "*" or w == r for w, r in zip(wanted, rendered))


def apply_filters(
    cases: Sequence[BenchmarkCase], patterns: Sequence[FilterPattern]
) -> list[BenchmarkCase]:
    """Keep cases matching any pattern; no patterns keeps everything."""
    if not patterns:
        return list(cases)
    return [c for c in cases if any(match_filter(p, c) for p in patterns)]


@dataclass(frozen=True)
class CliSettings:
    extents_list: tuple[Extents, ...] = DEFAULT_EXTENTS
    run_filters: tuple[FilterPattern, ...] = ()
    device: str = "cpu"
    output_path: str = "result.csv"
    warmups: int = RunSettings.warmups
    repetitions: int = RunSettings.repetitions
    error_bound: float = RunSettings.error_bound
    list_only: bool = False
    verbose: bool = False
    clients: tuple[str, ...] = field(default=tuple(BUILTIN_CLIENTS))

    @property
    def run_settings(self) -> RunSettings:
        return RunSettings(self.warmups, self.repetitions, self.error_bound)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)

    def exit(self, status=0, message=None):
        if message:
            sys.stderr.write(message)
        raise SystemExit(status)


def _extents_arg(text: str) -> Extents:
    try:
        return Extents.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad extents {text!r}: {exc}") from None


def _pattern_arg(text: str) -> FilterPattern:
    try:
        return FilterPattern.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return value


def _nonnegative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text!r}")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0: {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="fftbench",
        description="Phase-resolved FFT round-trip benchmark over the built-in clients.",
    )
    parser.add_argument("-e", "--extents", nargs="+", type=_extents_arg, metavar="NxMxK",
                        help="transform extents, e.g. 128x128 1024")
    parser.add_argument("-r", "--run", nargs="+", type=_pattern_arg, metavar="PATTERN",
                        default=[], help="title/precision/extents/kind_mode, '*' matches all")
    parser.add_argument("-d", "--device", default="cpu", help="device hint recorded in metadata")
    parser.add_argument("-o", "--output", default="result.csv", help="CSV output path")
    parser.add_argument("--warmups", type=_nonnegative_int, default=RunSettings.warmups)
    parser.add_argument("--repetitions", type=_positive_int, default=RunSettings.repetitions)
    parser.add_argument("--error-bound", type=_positive_float, default=RunSettings.error_bound)
    parser.add_argument("-l", "--list", action="store_true", help="list case ids and exit")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def parse_args(argv: Sequence[str]) -> CliSettings:
    """Parse ``argv`` (without the program name). Raises :class:`UsageError`."""
    ns = build_parser().parse_args(list(argv))
    return CliSettings(
        extents_list=tuple(ns.extents) if ns.extents else DEFAULT_EXTENTS,
        run_filters=tuple(ns.run),
        device=ns.device,
        output_path=ns.output,
        warmups=ns.warmups,
        repetitions=ns.repetitions,
        error_bound=ns.error_bound,
        list_only=ns.list,
        verbose=ns.verbose,
    )


def main_flow(
    settings: CliSettings,
    clients: Mapping[str, Callable[[BenchmarkCase], FftClient]] | None = None,
) -> int:
    """Build, filter and run the tree, then write the CSV. Returns the exit status.

    ``clients`` maps titles to client factories and defaults to the built-ins.
    """
    clients = dict(BUILTIN_CLIENTS if clients is None else clients)

    def factory(case: BenchmarkCase) -> FftClient:
        try:
            make = clients[case.client_title]
        except KeyError:
            raise UnsupportedCaseError(f"no client titled {case.client_title!r}") from None
        return make(case)

    try:
        tree = build_benchmark_tree(list(clients), settings.extents_list)
        run_settings = settings.run_settings
    except ValueError as exc:
        print(f"fftbench: {exc}", file=sys.stderr)
        return EXIT_USAGE
    tree = apply_filters(tree, settings.run_filters)

    if settings.list_only:
        for case in tree:
            print(case.id)
        return EXIT_OK
    if not tree:
        print("fftbench: warning: no benchmark case matches the filters", file=sys.stderr)

    results = run_suite(tree, factory, run_settings, HostContext(settings.device))
    results.metadata["filters"] = " ".join(str(p) for p in settings.run_filters) or "*"
    try:
        write_csv(results, settings.output_path)
    except OSError as exc:
        print(f"fftbench: cannot write {settings.output_path}: {exc}", file=sys.stderr)
        return EXIT_FAILURE

    if settings.verbose:
        for line in summarize(aggregate(results)):
            print(line, file=sys.stderr)
    failed = [r for r in results.records if r.failed]
    unsupported = {r.case_id for r in results.records if r.status is Status.UNSUPPORTED}
    print(
        f"fftbench: {len(results.records)} records, {len(failed)} failed, "
        f"{len(unsupported)} unsupported cases -> {settings.output_path}",
        file=sys.stderr,
    )
    if failed:
        for case_id in sorted({r.case_id for r in failed}):
            print(f"fftbench: FAILED {case_id}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        settings = parse_args(argv)
    except UsageError as exc:
        build_parser().print_usage(sys.stderr)
        print(f"fftbench: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.INFO if settings.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    return main_flow(settings)


if __name__ == "__main__":
    sys.exit(main())
