import pytest

from squeezebell._accel import HAVE_NUMBA

BACKENDS = ["numpy"] + (["numba"] if HAVE_NUMBA else [])


@pytest.fixture(params=BACKENDS)
def kernel_backend(request):
    return request.param


_CRITERIA = []


@pytest.fixture
def criterion(request):
    """Record a one-line verdict for an acceptance criterion.

    Usage: ``criterion("3", "label", ok, detail)``; the verdicts are printed
    in the terminal summary.
    """

    def record(number, label, ok, detail=""):
        _CRITERIA.append((number, label, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, label, ok, detail in sorted(_CRITERIA, key=lambda c: c[0]):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {label}  {detail}")
