import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

# criterion number -> (title, passed, seconds); filled while the acceptance tests run
_acceptance: dict[int, tuple[str, bool, float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): one of the numbered acceptance criteria")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or report.when not in ("setup", "call"):
        return
    number, title = marker.args
    if report.when == "setup" and report.passed:
        return
    line = (title, report.passed, report.duration)
    _acceptance[number] = line
    status = "PASS" if report.passed else "FAIL"
    # printed immediately as well, visible with -s
    print(f"\nacceptance {number}: {status}  {title}  ({report.duration:.1f} s)")


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        title, passed, seconds = _acceptance[number]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {number}. {title} ({seconds:.1f} s)")
    total = sum(1 for _, ok, _ in _acceptance.values() if ok)
    terminalreporter.write_line(f"{total}/{len(_acceptance)} criteria pass")
