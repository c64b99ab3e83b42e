import os
import re
import sys

sys.path.insert(0, os.path.dirname(__file__))

CRITERIA = {
    1: "circuit completeness and soundness",
    2: "double-spend exclusion",
    3: "ledger-wide mass conservation",
    4: "Merkle oracle equivalence",
    5: "grab semantics",
    6: "DvP atomicity",
    7: "audit round-trip",
    8: "determinism (run + replay)",
    9: "delegation binding",
}

_outcomes: dict[int, list[bool]] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_", report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _outcomes.setdefault(int(m.group(1)), []).append(report.outcome == "passed")


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        results = _outcomes.get(n)
        if results is None:
            status = "NOT RUN"
        else:
            status = "PASS" if all(results) else "FAIL"
            status += f" ({sum(results)}/{len(results)} cases)"
        terminalreporter.write_line(f"criterion {n}: {title}: {status}")
