import numpy as np
import pytest

from bellcm import gaussian

_CRITERIA: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)


@pytest.fixture
def report_criterion():
    """Record one PASS/FAIL line per acceptance criterion, printed in the summary."""

    def record(number: int, title: str, ok: bool, detail: str) -> None:
        _CRITERIA.append(f"[{'PASS' if ok else 'FAIL'}] {number}. {title}: {detail}")

    return record


def corpus(size: int, seed: int, efficiencies: bool = False):
    """Random Bell-like test cases: (V with n+2 modes, T, eta, eta_prime), n cycling 1..4."""
    rng = np.random.default_rng(seed)
    for k in range(size):
        n = k % 4 + 1
        V = gaussian.random_cm(n + 2, seed * 100_000 + k)
        T = rng.uniform(0.0, 1.0)
        if efficiencies:
            eta, eta_prime = rng.uniform(0.1, 1.0, size=2)
        else:
            eta = eta_prime = 1.0
        yield V, T, eta, eta_prime


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
