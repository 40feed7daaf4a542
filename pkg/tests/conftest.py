import pytest
from hypothesis import HealthCheck, settings

from wallcross.presets import load_preset

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# criterion number -> (description, passed); filled in by test_acceptance
ACCEPTANCE: dict[int, tuple[str, bool]] = {}


@pytest.fixture(scope="session")
def cp2():
    return load_preset("cp2-t1425")


@pytest.fixture(scope="session")
def p1xp1():
    return load_preset("p1xp1-t129")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        desc, ok = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {desc}")
