import pytest

from casimir_enz import BoundaryKind, CavityConfig, Drude, Layer, MirrorStack


@pytest.fixture
def pec():
    return MirrorStack(BoundaryKind.PEC)


@pytest.fixture
def pmc():
    return MirrorStack(BoundaryKind.PMC)


def coated(substrate, omega_p, thickness, omega_c=0.0):
    return MirrorStack(substrate, (Layer(Drude(omega_p, omega_c), thickness),))


def cavity(left, right, gap):
    return CavityConfig(left, right, gap)


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report(request):
    """Record one PASS/FAIL line per acceptance criterion, printed in the summary."""
    def emit(passed: bool, detail: str):
        _ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  {request.node.name}: {detail}")
    return emit


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
