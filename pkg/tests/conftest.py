import os
import warnings

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=25,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# one line per acceptance criterion, filled in by tests/test_acceptance.py
ACCEPTANCE_LINES = {}


@pytest.fixture(autouse=True)
def _quiet_quadpack():
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message=".*integrand.*")
        warnings.filterwarnings("ignore", message=".*extrapolation.*")
        warnings.filterwarnings("ignore", message=".*roundoff.*")
        warnings.filterwarnings("ignore", message=".*maximum number of subdivisions.*")
        yield


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
