import sys
import numpy as np
import pytest

from pdext import CATALOG_IDS, PdFunction, catalog_measure


@pytest.fixture(params=CATALOG_IDS)
def catalog_id(request):
    return request.param


@pytest.fixture
def catalog_pair(catalog_id):
    return PdFunction.catalog(catalog_id), catalog_measure(catalog_id)


def uniform_points(a, n):
    """n points in [0, a) whose pairwise differences stay inside (-a, a)."""
    return np.linspace(0.0, a, n, endpoint=False)


def pytest_terminal_summary(terminalreporter):
    # the acceptance module records one line per criterion it ran
    mod = sys.modules.get("test_acceptance")
    lines = [mod.RESULTS[k] for k in sorted(mod.RESULTS)] if mod else []
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
