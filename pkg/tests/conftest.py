import math

import numpy as np
import pytest
from hypothesis import strategies as st

from qparrondo.multiplexer import PolarBlock, PolarQubit

ACCEPTANCE_LINES: list[str] = []

thetas = st.floats(0.0, math.pi, allow_nan=False)
phases = st.floats(0.0, 2 * math.pi, allow_nan=False)
polar_blocks = st.builds(PolarBlock, thetas, phases, phases)
polar_qubits = st.builds(PolarQubit, thetas, phases, phases)
four_blocks = st.lists(polar_blocks, min_size=4, max_size=4).map(tuple)
probs = st.floats(0.05, 0.95, allow_nan=False)


def random_angles(rng: np.random.Generator) -> np.ndarray:
    """One draw of the 21 single-play angles over their full ranges."""
    hi = np.array([math.pi, 2 * math.pi, 2 * math.pi] * 7)
    return rng.uniform(0.0, hi)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


@pytest.fixture
def acceptance_report():
    def report(tag: str, ok: bool, detail: str = "") -> None:
        ACCEPTANCE_LINES.append(f"{tag}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
        assert ok, f"{tag} failed: {detail}"

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
