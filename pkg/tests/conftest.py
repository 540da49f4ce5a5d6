import sys

import pytest
from hypothesis import settings

from tvcf.numerics import PrecisionContext

settings.register_profile("tvcf", deadline=None, max_examples=60)
settings.load_profile("tvcf")


@pytest.fixture(scope="session")
def ctx128():
    return PrecisionContext(128)


@pytest.fixture(scope="session")
def ctx64():
    return PrecisionContext(64)


@pytest.fixture(scope="session")
def ctx40():
    return PrecisionContext(40)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
