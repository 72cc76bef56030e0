import numpy as np
import pytest

from freeineq.cheb import ChebSeries


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_phi(rng, degree, scale=1.0):
    """Random first-kind series with decaying coefficients."""
    c = rng.normal(size=degree + 1) * scale / (1.0 + np.arange(degree + 1))
    return ChebSeries.phi(c)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
