import cmath

import numpy as np
import pytest


def brute_dft(x, sign=-1):
    """Textbook double loop over Python complex numbers."""
    x = [complex(v) for v in x]
    n = len(x)
    return np.array(
        [sum(x[j] * cmath.exp(sign * 2j * cmath.pi * j * k / n) for j in range(n)) for k in range(n)]
    )


def brute_dft_nd(x, sign=-1):
    """Apply brute_dft along every axis."""
    x = np.asarray(x, dtype=complex)
    for axis in range(x.ndim):
        x = np.apply_along_axis(brute_dft, axis, x, sign)
    return x


@pytest.fixture
def rng():
    return np.random.default_rng(20170711)


def random_complex(rng, shape, dtype=np.complex128):
    return (rng.uniform(-1, 1, shape) + 1j * rng.uniform(-1, 1, shape)).astype(dtype)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import ACCEPTANCE_LINES
    except ImportError:
        return
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
