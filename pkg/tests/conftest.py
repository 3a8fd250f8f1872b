import os
import stat
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hypersat import solvers as S


def _installed_solvers():
    try:
        cfgs = S.load_solver_configs()
    except Exception:
        return []
    return [c for c in cfgs if S.solver_available(c)]


@pytest.fixture(scope="session")
def real_solvers():
    """Configured solvers whose binaries exist, or a skip."""
    cfgs = _installed_solvers()
    if not cfgs:
        pytest.skip("warning: no configured FOL/SMT solver installed; "
                    "solver-dependent checks skipped")
    return cfgs


def make_stub_solver(directory: Path, name: str, script: str) -> Path:
    """Write an executable stub solver script and return its path."""
    path = directory / name
    path.write_text("#!/bin/sh\n" + script)
    path.chmod(path.stat().st_mode | stat.S_IEXEC)
    return path


@pytest.fixture
def stub_dir(tmp_path):
    return tmp_path


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running exhaustive checks")


def pytest_collection_modifyitems(config, items):
    if os.environ.get("HYPERSAT_RUN_SLOW"):
        return
    skip = pytest.mark.skip(reason="slow; set HYPERSAT_RUN_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)
