import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from msdecomp.model import Decomposition, MonolithGraph  # noqa: E402


@pytest.fixture
def g4():
    """Chain A -> B -> C -> D, one static call per edge."""
    return MonolithGraph.from_edges("g4", [("A", "B"), ("B", "C"), ("C", "D")])


@pytest.fixture
def d2():
    return Decomposition.from_blocks([{"A", "B"}, {"C", "D"}], tool="d2", system="g4")


@pytest.fixture
def singletons4():
    return Decomposition.from_blocks([{"A"}, {"B"}, {"C"}, {"D"}], tool="singletons", system="g4")


@pytest.fixture
def mono4():
    return Decomposition.from_blocks([{"A", "B", "C", "D"}], tool="monolith", system="g4")


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
