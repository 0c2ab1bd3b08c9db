import re
import sys
from pathlib import Path

from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "pagree",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("pagree")

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\w+?)_")


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    lines = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            match = _CRITERION.search(report.nodeid)
            if match:
                verdict = "PASS" if outcome == "passed" else "FAIL"
                lines.append((match.group(1), verdict))
    if not lines:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for tag, verdict in sorted(lines):
        terminalreporter.write_line(f"ACCEPTANCE {tag}: {verdict}")
