import sys
from pathlib import Path

import numpy as np
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from odenorm.function_model import Exponent, Partition, StepFunction  # noqa: E402

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def partitions(draw, max_cells=16):
    n = draw(st.integers(1, max_cells))
    inner = draw(
        st.lists(st.floats(0.001, 0.999), min_size=n - 1, max_size=n - 1, unique=True)
    )
    bp = np.concatenate([[0.0], np.sort(inner), [1.0]])
    if np.any(np.diff(bp) <= 1e-9):
        bp = np.linspace(0.0, 1.0, n + 1)
    return Partition(bp)


magnitudes = st.floats(1e-3, 1e3)


@st.composite
def step_functions(draw, partition=None, signed=True, zeros=False):
    part = partition if partition is not None else draw(partitions())
    mags = st.one_of(st.just(0.0), magnitudes) if zeros else magnitudes
    vals = np.array(draw(st.lists(mags, min_size=part.n_cells, max_size=part.n_cells)))
    if signed:
        signs = draw(st.lists(st.sampled_from([-1.0, 1.0]),
                              min_size=part.n_cells, max_size=part.n_cells))
        vals = vals * np.array(signs)
    return StepFunction(part, vals)


@st.composite
def exponents(draw, partition=None, lo=1.0, hi=10.0):
    part = partition if partition is not None else draw(partitions())
    vals = draw(st.lists(st.floats(lo, hi), min_size=part.n_cells, max_size=part.n_cells))
    return Exponent(part, vals)


@st.composite
def pairs(draw, lo=1.0, hi=10.0):
    """``(f, p)`` on one shared partition."""
    part = draw(partitions())
    return draw(step_functions(part)), draw(exponents(part, lo, hi))


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in acceptance.RESULTS.values():
        terminalreporter.write_line(line)
