import numpy as np
import pytest

from hyperminhash import SketchParams


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def params():
    return SketchParams(p=8, q=6, r=10)


def random_u64(rng, size):
    return rng.integers(0, 2**64, size=size, dtype=np.uint64)


# criterion id -> (passed, detail); filled by test_acceptance, printed at the end
ACCEPTANCE_RESULTS: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {key}: {detail}")
