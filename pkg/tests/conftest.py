import pytest

from kumlift import _pykernels, kernels

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(params=["python", "native"])
def backend(request, monkeypatch):
    """Run a test once per kernel backend (native falls back to python if not built)."""
    if request.param == "python":
        for name in ("matmul", "det", "adjugate_solve", "exterior_power"):
            monkeypatch.setattr(kernels, name, getattr(_pykernels, name))
    return request.param


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
