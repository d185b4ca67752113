import numpy as np
import pytest

_REPORT = []


@pytest.fixture
def report():
    """Collect one PASS/FAIL line per acceptance criterion."""
    def _report(name, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] {name}" + (f"  ({detail})" if detail else "")
        _REPORT.append(line)
        print(line)
        return ok
    return _report


def pytest_terminal_summary(terminalreporter):
    if _REPORT:
        terminalreporter.section("acceptance criteria")
        for line in _REPORT:
            terminalreporter.write_line(line)


@pytest.fixture
def worked_H():
    # rows f1..f4 of the hand-worked 4-antenna, 2-user instance
    return np.array([[2, 0], [0, 1], [0, 1.5], [10, 1]], dtype=complex)


def random_channel(rng, n_r, n_u, spread=True):
    H = (rng.standard_normal((n_r, n_u)) + 1j * rng.standard_normal((n_r, n_u))) / np.sqrt(2)
    if spread:
        H *= np.sqrt(10 ** rng.uniform(-1, 1, n_u))[None, :]
    return H
