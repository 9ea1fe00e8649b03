import os

import pytest
from hypothesis import HealthCheck, settings

from silting.fixtures import load_pack
from silting.linalg import PrimeField, Rationals

settings.register_profile(
    "default", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

FIELDS = {"F2": PrimeField(2), "Q": Rationals()}


@pytest.fixture(params=["F2", "Q"])
def field(request):
    return FIELDS[request.param]


@pytest.fixture
def eximp():
    return load_pack("eximp")


@pytest.fixture
def ejp1():
    return load_pack("ejp1")


@pytest.fixture
def radsq3():
    return load_pack("radsq3")


@pytest.fixture
def gamma_eximp():
    return load_pack("gamma-eximp")


ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Record one line per acceptance criterion and echo it live."""
    lines = request.config.stash.setdefault(ACCEPTANCE_KEY, [])
    capman = request.config.pluginmanager.getplugin("capturemanager")

    def report(number: int, ok: bool, detail: str) -> None:
        line = f"CRITERION {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines.append(line)
        with capman.global_and_fixture_disabled():
            print("\n" + line)

    return report


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
