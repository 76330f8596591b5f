import pytest

from scgeom import fixtures


@pytest.fixture(scope="session")
def disk():
    return fixtures.unit_disk()


@pytest.fixture(scope="session")
def square():
    return fixtures.unit_square()


@pytest.fixture(scope="session")
def ellipse():
    return fixtures.ellipse()


@pytest.fixture(scope="session")
def union():
    return fixtures.tangent_disks()


@pytest.fixture(scope="session")
def three_disk():
    return fixtures.three_disk()


_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if report.when == "call" or (report.when == "setup" and report.failed):
        n = dict(report.user_properties).get("acceptance")
        if n is not None:
            _ACCEPTANCE[n] = (report.nodeid.split("::")[-1], report.passed)


def pytest_runtest_setup(item):
    m = item.get_closest_marker("acceptance")
    if m is not None:
        item.user_properties.append(("acceptance", m.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance")
    for n in sorted(_ACCEPTANCE):
        name, ok = _ACCEPTANCE[n]
        terminalreporter.write_line(f"{n:>2}  {'PASS' if ok else 'FAIL'}  {name}")
