import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fftbench.cli import (
    DEFAULT_EXTENTS,
    EXIT_FAILURE,
    EXIT_OK,
    EXIT_USAGE,
    CliSettings,
    FilterPattern,
    UsageError,
    apply_filters,
    main,
    main_flow,
    match_filter,
    parse_args,
)
from fftbench.clients import RefFFTClient
from fftbench.core import BenchmarkCase, Extents, MemoryMode, Precision, TransformKind
from fftbench.harness import build_benchmark_tree
from fftbench.records import Status
from fftbench.results import read_csv


def case(title="RefFFT", precision=Precision.SINGLE, dims=(128, 128),
         kind=TransformKind.REAL_TO_COMPLEX, mode=MemoryMode.IN_PLACE):
    return BenchmarkCase(title, precision, Extents(dims), kind, mode)


class TestParseArgs:
    def test_listing_example(self):
        s = parse_args("-e 128x128 1024 -r */float/*/Inplace_Real -d cpu".split())
        assert s.extents_list == (Extents(128, 128), Extents(1024))
        assert s.run_filters == (FilterPattern("*", "float", "*", "Inplace_Real"),)
        assert s.device == "cpu"

    def test_defaults(self):
        s = parse_args([])
        assert s.output_path == "result.csv"
        assert s.extents_list == DEFAULT_EXTENTS
        assert (s.warmups, s.repetitions, s.error_bound) == (1, 10, 1e-5)
        assert not s.list_only

    def test_overrides(self):
        s = parse_args(["-o", "x.csv", "--warmups", "0", "--repetitions", "3", "--error-bound", "1e-6", "-l", "-v"])
        assert (s.output_path, s.warmups, s.repetitions, s.error_bound) == ("x.csv", 0, 3, 1e-6)
        assert s.list_only and s.verbose

    def test_bad_extents_names_token(self):
        with pytest.raises(UsageError, match="12x"):
            parse_args(["-e", "12x"])

    @pytest.mark.parametrize("pattern", ["*/float/*", "*/float/*/Inplace_Real/x", "*/half/*/*", "*/*/*/Inplace", "*//*/*"])
    def test_bad_pattern(self, pattern):
        with pytest.raises(UsageError):
            parse_args(["-r", pattern])

    @pytest.mark.parametrize("value", ["0", "-2", "abc"])
    def test_bad_repetitions(self, value):
        with pytest.raises(UsageError):
            parse_args(["--repetitions", value])

    def test_unknown_flag(self):
        with pytest.raises(UsageError, match="--bogus"):
            parse_args(["--bogus"])

    @given(st.lists(st.text(max_size=12), max_size=6))
    def test_total(self, argv):
        try:
            assert isinstance(parse_args(argv), CliSettings)
        except UsageError as exc:
            assert str(exc)


class TestFilter:
    def test_listing_pattern(self):
        assert match_filter(FilterPattern.parse("*/float/*/Inplace_Real"), case())

    def test_all_wildcards(self):
        p = FilterPattern.parse("*/*/*/*")
        for c in build_benchmark_tree(["RefFFT", "NaiveDFT"], [Extents(8), Extents(4, 4, 4)]):
            assert match_filter(p, c)

    def test_precision_mismatch(self):
        assert not match_filter(FilterPattern.parse("*/double/*/Inplace_Real"), case())

    def test_literal_fields(self):
        assert match_filter(FilterPattern.parse("RefFFT/float/128x128/*"), case())
        assert not match_filter(FilterPattern.parse("NaiveDFT/*/*/*"), case())
        assert not match_filter(FilterPattern.parse("*/*/128/*"), case())

    def test_patterns_or(self):
        tree = build_benchmark_tree(["RefFFT"], [Extents(8)])
        got = apply_filters(tree, [FilterPattern.parse("*/float/*/*"), FilterPattern.parse("*/*/*/Outplace_Complex")])
        assert len(got) == 4 + 1

    def test_case_id_parses_back_into_pattern(self):
        for c in build_benchmark_tree(["RefFFT", "NaiveDFT"], [Extents(8), Extents(6, 5, 4)]):
            p = FilterPattern.parse(c.id)
            assert match_filter(p, c)
            assert str(p) == c.id

    def test_filter_commutes_with_enumeration(self):
        tree = build_benchmark_tree(["RefFFT", "NaiveDFT"], [Extents(8), Extents(16)])
        patterns = [FilterPattern.parse("NaiveDFT/*/16/*")]
        ids_then_filter = [c.id for c in tree if any(match_filter(p, c) for p in patterns)]
        assert [c.id for c in apply_filters(tree, patterns)] == ids_then_filter


class TestMainFlow:
    def test_list_only(self, capsys, tmp_path):
        code = main(["-e", "64", "-r", "*/float/*/Inplace_Real", "-l", "-o", str(tmp_path / "r.csv")])
        assert code == EXIT_OK
        assert capsys.readouterr().out.split() == ["RefFFT/float/64/Inplace_Real", "NaiveDFT/float/64/Inplace_Real"]
        assert not (tmp_path / "r.csv").exists()

    def test_small_run(self, tmp_path):
        out = tmp_path / "r.csv"
        code = main(["-e", "64", "6x5", "-r", "*/double/*/*", "--repetitions", "2", "-o", str(out)])
        assert code == EXIT_OK
        results = read_csv(out)
        assert len(results.records) == 2 * 2 * 4 * 2
        assert all(r.ok for r in results.records)
        assert results.metadata["device"].startswith("cpu")

    def test_no_match_writes_empty(self, tmp_path, capsys):
        out = tmp_path / "r.csv"
        assert main(["-e", "64", "-r", "nobody/*/*/*", "-o", str(out)]) == EXIT_OK
        assert read_csv(out).records == []
        assert "warning" in capsys.readouterr().err

    def test_usage_error_exit(self, capsys):
        assert main(["-e", "12x"]) == EXIT_USAGE
        assert "12x" in capsys.readouterr().err

    def test_unwritable_output(self, tmp_path):
        settings = parse_args(["-e", "8", "--repetitions", "1", "-o", str(tmp_path / "missing" / "r.csv")])
        assert main_flow(settings) == EXIT_FAILURE

    def test_injected_failing_client(self, tmp_path):
        class AlwaysFails(RefFFTClient):
            title = "AlwaysFails"

            def _execute_forward(self):
                raise RuntimeError("injected")

        out = tmp_path / "r.csv"
        settings = parse_args(["-e", "16", "--repetitions", "2", "-o", str(out)])
        code = main_flow(settings, {"RefFFT": RefFFTClient, "AlwaysFails": AlwaysFails})
        assert code == EXIT_FAILURE
        records = read_csv(out).records
        bad = [r for r in records if r.case.client_title == "AlwaysFails"]
        good = [r for r in records if r.case.client_title == "RefFFT"]
        assert len(bad) == 8 and all(r.status is Status.PHASE_ERROR for r in bad)
        assert len(good) == 16 and all(r.ok for r in good)


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "fftbench", "-e", "32", "-l"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert "RefFFT/float/32/Inplace_Real" in proc.stdout
