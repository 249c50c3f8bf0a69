import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from cherbolic.domains import CaseId
from cherbolic.groups import FAMILIES

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

finite = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)
complexes = st.builds(complex, finite, finite)
vectors = st.lists(complexes, min_size=3, max_size=3).map(lambda xs: np.array(xs, dtype=complex))
nonzero_vectors = vectors.filter(lambda v: np.linalg.norm(v) > 1e-3)


@pytest.fixture(scope="session")
def tau1_p3():
    return FAMILIES["tau1"].build(3)


@pytest.fixture(scope="session")
def tau1_p6():
    return FAMILIES["tau1"].build(6)


@pytest.fixture(scope="session")
def tau1_case_p3():
    return CaseId("tau1", 3)


ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def record(request):
    """Store the one-line verdict of an acceptance criterion for the terminal summary."""
    lines = request.config.stash.setdefault(ACCEPTANCE, {})

    def _record(number: int, passed: bool, detail: str) -> None:
        lines[number] = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
        print(lines[number])

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for k in sorted(lines):
            terminalreporter.write_line(lines[k])
