from __future__ import annotations

import pytest

from subregfrob.cache import Cache
from subregfrob.lie import build_d4_basis, dual_basis_and_structure_constants
from subregfrob.pipeline import run_pipeline

ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture(scope="session")
def cache_dir(tmp_path_factory):
    return tmp_path_factory.mktemp("sfcache")


@pytest.fixture(scope="session")
def d4():
    return build_d4_basis()


@pytest.fixture(scope="session")
def dual(d4):
    return dual_basis_and_structure_constants(d4[2])


@pytest.fixture(scope="session")
def run(cache_dir):
    """One full pipeline run shared by every module-level suite."""
    return run_pipeline("d4", cache=Cache(cache_dir))


@pytest.fixture(scope="session")
def report(run):
    return run[0]


@pytest.fixture(scope="session")
def state(run):
    return run[1]



@pytest.fixture(scope="session")
def acceptance(pytestconfig):
    """Criterion number -> PASS/FAIL line, echoed in the terminal summary."""
    return pytestconfig.stash.setdefault(ACCEPTANCE, {})


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
