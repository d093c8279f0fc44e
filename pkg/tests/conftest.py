import numpy as np
import pytest

from acogrn import _backend
from acogrn.correlation import CorrelationMatrix
from acogrn.datasets import sos_correlation

_ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def sos():
    return sos_correlation()


@pytest.fixture(params=_backend.available())
def backend(request):
    return request.param


def random_corr(rng: np.random.Generator, n: int) -> CorrelationMatrix:
    """Symmetric matrix with unit diagonal and off-diagonals uniform in [-1, 1]."""
    a = np.triu(rng.uniform(-1.0, 1.0, (n, n)), 1)
    a = a + a.T
    np.fill_diagonal(a, 1.0)
    return CorrelationMatrix([f"g{i}" for i in range(n)], a)
