import random
from pathlib import Path

import pytest

from distconform.constructions import fixtures

DATA = Path(__file__).resolve().parents[1] / "src" / "distconform" / "data"


@pytest.fixture(scope="session")
def fx():
    return fixtures()


@pytest.fixture
def rng():
    return random.Random(20240601)


@pytest.fixture(scope="session")
def data_dir():
    return DATA


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
