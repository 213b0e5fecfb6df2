import os

import pytest
from hypothesis import HealthCheck, settings

from koszul_lab import models as mdl
from koszul_lab.field import get_field

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def F101():
    return get_field(101)


@pytest.fixture(scope="session")
def g4(F101):
    return mdl.gen_canonical(4, "ci", F101, seed=11)


@pytest.fixture(scope="session")
def g6(F101):
    return mdl.gen_canonical(6, "grass", F101, seed=11)


@pytest.fixture(scope="session")
def g6_sextic(F101):
    return mdl.gen_canonical_sextic(F101, seed=11)


@pytest.fixture(scope="session")
def k3(F101):
    return mdl.gen_k3_g6(F101, seed=11)
