import itertools

import numpy as np
import pytest

from fftbench.clients import (
    NAIVE_MAX_ELEMENTS,
    FftClient,
    HostContext,
    NaiveDFTClient,
    OrderingError,
    PhaseError,
    RefFFTClient,
    UnsupportedCaseError,
    _lifecycle,
    execute_roundtrip,
    make_builtin_client,
)
from fftbench.core import BenchmarkCase, Extents, MemoryMode, Precision, TransformKind
from fftbench.harness import fill_seesaw
from fftbench.records import PHASES
from fftbench.reference_fft import normalize

R2C, C2C = TransformKind.REAL_TO_COMPLEX, TransformKind.COMPLEX_TO_COMPLEX
INPLACE, OUTPLACE = MemoryMode.IN_PLACE, MemoryMode.OUT_OF_PLACE


def case(title="RefFFT", dims=(32,), precision=Precision.DOUBLE, kind=C2C, mode=OUTPLACE):
    return BenchmarkCase(title, precision, Extents(dims), kind, mode)


def host_input(c):
    dtype = c.precision.real_dtype if c.kind is R2C else c.precision.complex_dtype
    return fill_seesaw(np.empty(c.extents.dims, dtype))


ALL_CASES = [
    case(title, dims, p, k, m)
    for title in ("RefFFT", "NaiveDFT")
    for dims in [(16,), (15,), (6, 10), (4, 3, 5)]
    for p, k, m in itertools.product(Precision, TransformKind, MemoryMode)
]


def test_make_builtin_client_alloc_size():
    c = case("RefFFT", (128, 128), Precision.SINGLE, R2C, OUTPLACE)
    client = make_builtin_client("RefFFT", c)
    client.allocate()
    assert client.get_alloc_size() == 4 * 16384 + 8 * 128 * 65


def test_naive_guard():
    assert isinstance(make_builtin_client("NaiveDFT", case("NaiveDFT", (1024,))), NaiveDFTClient)
    with pytest.raises(UnsupportedCaseError):
        make_builtin_client("NaiveDFT", case("NaiveDFT", (1024, 1024)))
    assert NaiveDFTClient.supports(case("NaiveDFT", (NAIVE_MAX_ELEMENTS,)))
    assert not NaiveDFTClient.supports(case("NaiveDFT", (NAIVE_MAX_ELEMENTS + 2,)))


def test_unknown_title():
    with pytest.raises(ValueError, match="unknown client"):
        make_builtin_client("cuFFT", case())


def test_builtin_capabilities():
    for cls in (RefFFTClient, NaiveDFTClient):
        assert cls.normalizes_inverse is False
        assert cls.plans_upfront is False


@pytest.mark.parametrize("c", ALL_CASES, ids=str)
def test_round_trip_restores_input(c):
    x = host_input(c)
    client = make_builtin_client(c.client_title, c)
    out, timings = execute_roundtrip(client, x.copy())
    tol = 1e-5 if c.precision is Precision.SINGLE else 1e-12
    assert np.max(np.abs(normalize(out, c.elements) - x)) < tol
    assert client.state == "destructed"
    assert client.get_alloc_size() >= client.get_transfer_size()
    if c.client_title == "RefFFT":
        assert client.get_plan_size() > 0


def test_timings_structure():
    c = case("RefFFT", (32, 32, 32), Precision.SINGLE, R2C, OUTPLACE)
    _, t = execute_roundtrip(make_builtin_client("RefFFT", c), host_input(c))
    assert all(t.phase(p) >= 0 for p in PHASES)
    assert t.total_ms >= t.phase_sum
    assert t.total_ms >= max(t.phase(p) for p in PHASES)


def test_naive_delta_round_trip():
    c = case("NaiveDFT", (4,))
    x = np.array([1, 0, 0, 0], dtype=complex)
    out, _ = execute_roundtrip(make_builtin_client("NaiveDFT", c), x)
    assert np.max(np.abs(normalize(out, 4) - x)) < 1e-12


def test_sizes_and_transfer():
    c = case("RefFFT", (64,), Precision.DOUBLE, R2C, INPLACE)
    client = make_builtin_client("RefFFT", c)
    client.allocate()
    assert client.get_alloc_size() == max(64 * 8, 33 * 16)
    assert client.get_transfer_size() == 64 * 8
    assert client.get_plan_size() == 0
    client.init_forward()
    assert client.get_plan_size() > 0


def test_in_place_shares_one_buffer():
    c = case("RefFFT", (16,), Precision.DOUBLE, C2C, INPLACE)
    client = make_builtin_client("RefFFT", c)
    client.allocate()
    assert len(client._buffers) == 1
    assert np.shares_memory(client._signal, client._spectrum)


def test_repeat_round_trips_are_bitwise_identical():
    for title, dims in [("RefFFT", (1009,)), ("RefFFT", (8, 6, 5)), ("NaiveDFT", (64,))]:
        c = case(title, dims, Precision.SINGLE, R2C, OUTPLACE)
        x = host_input(c)
        a, _ = execute_roundtrip(make_builtin_client(title, c), x.copy())
        b, _ = execute_roundtrip(make_builtin_client(title, c), x.copy())
        np.testing.assert_array_equal(a, b)


class FailingForward(RefFFTClient):
    title = "Failing"
    calls = []

    def _execute_forward(self):
        raise RuntimeError("boom")

    def _execute_inverse(self):
        FailingForward.calls.append("execute_inverse")


def test_failure_is_tagged_with_phase():
    c = case("Failing", (16,))
    client = FailingForward(c)
    with pytest.raises(PhaseError) as info:
        execute_roundtrip(client, host_input(c))
    assert info.value.phase == "execute_forward"
    assert "boom" in info.value.message
    assert info.value.timings.allocate_ms >= 0
    assert FailingForward.calls == []
    assert client.state == "upload"


class TestOrdering:
    def fresh(self, upfront=False):
        cls = type("Upfront", (RefFFTClient,), {"plans_upfront": True}) if upfront else RefFFTClient
        c = case()
        return cls(c), host_input(c)

    def drive(self, client, x, sequence):
        args = {"upload": (x,), "download": (np.empty_like(x),)}
        for name in sequence:
            getattr(client, name)(*args.get(name, ()))

    @pytest.mark.parametrize("upfront", [False, True])
    def test_legal_order_accepted(self, upfront):
        client, x = self.fresh(upfront)
        self.drive(client, x, [*_lifecycle(upfront), "destruct"])
        assert client.state == "destructed"

    @pytest.mark.parametrize("upfront", [False, True])
    def test_every_out_of_order_call_is_rejected(self, upfront):
        order = list(_lifecycle(upfront))
        for position in range(len(order)):
            for wrong in set(order) - {order[position]}:
                if wrong == "destroy" and position > order.index("destroy"):
                    continue
                client, x = self.fresh(upfront)
                self.drive(client, x, order[:position])
                with pytest.raises(OrderingError):
                    self.drive(client, x, [wrong])

    def test_inverse_plan_before_forward_execute_rejected(self):
        client, x = self.fresh(upfront=False)
        self.drive(client, x, ["allocate", "init_forward"])
        with pytest.raises(OrderingError):
            client.init_inverse()

    def test_size_queries_need_allocate(self):
        client, _ = self.fresh()
        for query in (client.get_alloc_size, client.get_transfer_size, client.get_plan_size):
            with pytest.raises(OrderingError):
                query()

    def test_size_queries_are_side_effect_free(self):
        client, x = self.fresh()
        client.allocate()
        client.get_alloc_size(), client.get_transfer_size(), client.get_plan_size()
        assert client.state == "allocate"
        self.drive(client, x, list(_lifecycle(False))[1:])

    def test_destroy_idempotent_and_destruct_after_destroy(self):
        client, x = self.fresh()
        self.drive(client, x, _lifecycle(False))
        client.destroy()
        client.destroy()
        client.destruct()
        client.destruct()

    def test_destruct_before_destroy_rejected(self):
        client, x = self.fresh()
        self.drive(client, x, ["allocate", "init_forward"])
        with pytest.raises(OrderingError):
            client.destruct()

    def test_nothing_after_destruct(self):
        client, x = self.fresh()
        self.drive(client, x, [*_lifecycle(False), "destruct"])
        with pytest.raises(OrderingError):
            client.allocate()

    def test_construct_then_destruct(self):
        client, _ = self.fresh()
        client.destruct()


def test_plans_upfront_order_in_roundtrip():
    seen = []

    class Recorder(RefFFTClient):
        plans_upfront = True

        def _init_inverse(self):
            seen.append(self.state)
            super()._init_inverse()

    c = case()
    execute_roundtrip(Recorder(c), host_input(c))
    assert seen == ["init_forward"]


def test_custom_timer_hook_is_used():
    ticks = itertools.count(0, 1_000_000)

    class Ticking(RefFFTClient):
        timer = staticmethod(lambda: next(ticks))

    c = case()
    _, t = execute_roundtrip(Ticking(c), host_input(c))
    assert all(t.phase(p) == 1.0 for p in PHASES)
    # one tick at start, two per phase, one at the end
    assert t.total_ms == 2 * len(PHASES) + 1


def test_minimal_adapter_subclass():
    """A third-party adapter only fills in hooks."""

    class Scaled(FftClient):
        title = "Scaled"
        normalizes_inverse = True

        def _allocate(self):
            self.buf = None

        def _init_forward(self):
            pass

        def _init_inverse(self):
            pass

        def _upload(self, host):
            self.buf = np.array(host)

        def _execute_forward(self):
            self.buf = np.fft.fft(self.buf)

        def _execute_inverse(self):
            self.buf = np.fft.ifft(self.buf)

        def _download(self, out):
            out[...] = self.buf
            return out

        def _destroy(self):
            self.buf = None

    c = case("Scaled")
    x = host_input(c)
    out, _ = execute_roundtrip(Scaled(c), x)
    np.testing.assert_allclose(out, x, atol=1e-12)


def test_host_context():
    ctx = HostContext("cpu")
    ctx.create()
    assert ctx.title() == "host"
    assert ctx.device_description().startswith("cpu")
    ctx.destroy()
