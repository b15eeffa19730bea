import pytest
from hypothesis import HealthCheck, settings

from dcshuffle import MessageId, VarLabel, derive_shuffle_problem, gen_family

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def R(k, f):
    return VarLabel.rate(MessageId(k, f))


@pytest.fixture(scope="session")
def ex1():
    return derive_shuffle_problem(gen_family(3, 2, 2, 3, capacities=1))


@pytest.fixture(scope="session")
def ex2():
    return derive_shuffle_problem(gen_family(6, 4, 2, 6, capacities=1))


# ---------------------------------------------------------------- acceptance summary

_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _acceptance[report.nodeid] = report.outcome
    elif "test_acceptance.py" in report.nodeid and report.when == "setup" and report.failed:
        _acceptance[report.nodeid] = "failed"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, outcome in sorted(_acceptance.items(), key=lambda kv: kv[0]):
        name = nodeid.split("::")[-1]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name}")
