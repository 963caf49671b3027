import pytest

from chanspec import presets


@pytest.fixture(scope="session")
def h2k1():
    return presets.h2k1()


@pytest.fixture(scope="session")
def h2k2():
    return presets.h2k2()


@pytest.fixture(scope="session")
def three():
    return presets.three()


# acceptance summary: one PASS/FAIL line per numbered criterion
_CRITERIA: dict[int, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k): acceptance criterion number k")


def pytest_runtest_logreport(report):
    if report.when == "call" or (report.when == "setup" and report.failed):
        for name, k in report.user_properties:
            if name == "criterion":
                _CRITERIA.setdefault(k, []).append(report.passed)


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            item.user_properties.append(("criterion", mark.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        ok = all(_CRITERIA[k])
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'} ({sum(_CRITERIA[k])}/{len(_CRITERIA[k])} checks)")
