import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.hookimpl(tryfirst=True, hookwrapper=True)
def pytest_runtest_makereport(item, call):
    # expose per-phase reports so the acceptance module can print PASS/FAIL
    outcome = yield
    report = outcome.get_result()
    setattr(item, "rep_" + report.when, report)
