import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    marker = getattr(report, "criterion", None)
    if marker is not None:
        verdict = "PASS" if report.passed else "FAIL"
        # parametrized cases share one criterion; any failure fails it
        if _RESULTS.get(marker) != "FAIL":
            _RESULTS[marker] = verdict


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        rep.criterion = (m.args[0], m.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for (num, title), verdict in sorted(_RESULTS.items()):
        terminalreporter.write_line(f"criterion {num}: {verdict}  {title}")
