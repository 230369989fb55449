import sys

import pytest

from dmojc.qnums import BranchD3, Dimensionality, ModelSpec


@pytest.fixture
def resonant():
    """Two-isospin 1+1 model at resonance, gamma = 1."""
    return ModelSpec(dim=Dimensionality.D1, eta=1.0, chi=1.0, mc2=1.0, gamma=1.0, extended=True)


@pytest.fixture
def d3_infinite():
    return ModelSpec(dim=Dimensionality.D3, eta=1.0, mc2=0.0, j=0.5, branch=BranchD3.INFINITE)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
