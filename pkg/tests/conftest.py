import re

import numpy as np
import pytest

from liftlap import build_complex, edge_voltages
from liftlap.reference_fixture import search_reference_fixture

_CRITERION = re.compile(r"test_criterion_(\d+[a-z]?)_(\w+)")


def pytest_runtest_logreport(report):
    """One visible pass/fail line per acceptance criterion."""
    if report.when != "call":
        return
    m = _CRITERION.search(report.nodeid)
    if m:
        status = "PASS" if report.passed else "FAIL"
        label = m.group(2).replace("_", " ")
        print(f"\n[acceptance] criterion {m.group(1)} ({label}): {status}", flush=True)

# Canonical search result, frozen for the unit tests; the acceptance
# suite re-derives it from scratch and checks it still matches.
REFERENCE_FACETS = ((0, 1, 2), (0, 1, 3), (0, 2, 4), (0, 3, 5), (2, 3, 4), (3, 4, 5))
REFERENCE_FLIP = ((0, 2), (0, 1, 2))


def cycle_complex(n, include_empty=True):
    return build_complex(
        [(i, (i + 1) % n) for i in range(n)], include_empty=include_empty
    )


def cycle_laplacian_values(n):
    """Closed-form spectrum of the n-cycle graph Laplacian."""
    return sorted(2 - 2 * np.cos(2 * np.pi * j / n) for j in range(n))


@pytest.fixture(scope="session")
def reference():
    fixture = search_reference_fixture()
    assert fixture is not None, "reference complex not recovered by the spectrum search"
    return fixture


@pytest.fixture()
def triangle():
    return build_complex([{0, 1, 2}])


@pytest.fixture()
def hollow_triangle():
    return build_complex([{0, 1}, {1, 2}, {0, 2}])


@pytest.fixture()
def c3_double_cover():
    """The 6-cycle as a 2-fold cover of the 3-cycle (one flipped edge)."""
    from liftlap import derived_complex

    base = cycle_complex(3)
    psi = edge_voltages(base, 2, {(0, 1): (1, 0)})
    result = derived_complex(base, psi)
    assert result.connected
    return result
