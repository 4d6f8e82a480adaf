import sys

import pytest

from ninepoints import catalog
from ninepoints.linalg import GF
from ninepoints.nineverify import random_general_config


@pytest.fixture(scope="session")
def general9():
    return random_general_config(seed=1)


@pytest.fixture(scope="session")
def torsion_configs():
    """Generated rational configurations keyed by the order of their class."""
    return {d: catalog.generate_config(d, seed=0) for d in (1, 2, 3, 4, 5, 6)}


@pytest.fixture(scope="session")
def pencil9(torsion_configs):
    return torsion_configs[1].config


@pytest.fixture(scope="session")
def torsion2(torsion_configs):
    return torsion_configs[2].config


@pytest.fixture(scope="session")
def gf101_configs():
    return {d: catalog.generate_config(d, GF(101), seed=0) for d in (5, 7, 9)}


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for num in sorted(results):
            terminalreporter.write_line(results[num])
