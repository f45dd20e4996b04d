"""Collects results of tests marked ``criterion(n)`` into one verdict line per criterion."""

_CRITERIA: dict[int, list[bool]] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("criterion")
        if marker is not None:
            item.user_properties.append(("criterion", marker.args[0]))


def pytest_runtest_logreport(report):
    numbers = [value for key, value in report.user_properties if key == "criterion"]
    if not numbers:
        return
    if report.when == "call" or not report.passed:
        _CRITERIA.setdefault(numbers[0], []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        verdict = "PASS" if all(_CRITERIA[number]) else "FAIL"
        terminalreporter.write_line(f"acceptance criterion {number}: {verdict}")
