import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def rank2_rows():
    from nichols_lattice import catalog
    return catalog.bundled(2)


@pytest.fixture(scope="session")
def rank3_rows():
    from nichols_lattice import catalog
    return catalog.bundled(3)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = next((m for name, m in list(sys.modules.items()) if name.endswith("test_acceptance")), None)
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
