import re
import sys
from collections import OrderedDict
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_CRITERION = re.compile(r"test_criterion_(\d+)(?:_(\w+))?")
_results: "OrderedDict[int, list]" = OrderedDict()


def pytest_runtest_logreport(report):
    if "test_acceptance" not in report.nodeid:
        return
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    m = _CRITERION.search(report.nodeid.split("::")[-1])
    if m:
        _results.setdefault(int(m.group(1)), []).append((m.group(2) or "", report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        parts = _results[number]
        ok = all(outcome == "passed" for _, outcome in parts)
        detail = ", ".join(f"{name or 'check'} {outcome}" for name, outcome in parts)
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})")
