import os
import re
import sys
import tempfile
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

# keep the delta cache out of the user's home during tests
os.environ.setdefault("LEGENDRE_FD_DELTA_CACHE", str(Path(tempfile.mkdtemp()) / "delta.txt"))

from legendre_fd import PotentialSpec, build_mesh  # noqa: E402
from legendre_fd import reference  # noqa: E402

_CRITERION = re.compile(r"test_criterion_(\d+)_(\w+)")
_results = {}


@pytest.fixture(scope="session")
def bench_spec():
    return PotentialSpec.log_product(*reference.BENCH_POTENTIAL)


@pytest.fixture(scope="session")
def bench_mesh():
    return build_mesh(reference.BENCH_K, reference.BENCH_BREAKPOINTS)


def pytest_runtest_logreport(report):
    match = _CRITERION.search(report.nodeid)
    if not match:
        return
    key = int(match.group(1))
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _results[key] = (match.group(2).replace("_", " "), report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_results):
        name, outcome = _results[key]
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {key}: {status}  {name}")
