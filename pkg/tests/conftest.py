import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

_acceptance: dict[int, list[tuple[str, str]]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for key, value in report.user_properties:
        if key == "criterion":
            _acceptance.setdefault(value[0], []).append((value[1], report.outcome))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is not None and not any(k == "criterion" for k, _ in rep.user_properties):
        rep.user_properties.append(("criterion", (marker.args[0], marker.kwargs.get("title", item.name))))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        results = _acceptance[number]
        ok = all(outcome == "passed" for _, outcome in results)
        title = results[0][0]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}")
