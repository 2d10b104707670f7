import random

import pytest
from hypothesis import settings

# derandomized so the whole suite is reproducible run to run
settings.register_profile("repro", derandomize=True, deadline=None, max_examples=60)
settings.load_profile("repro")


@pytest.fixture
def rng():
    return random.Random("tests")


def pytest_terminal_summary(terminalreporter):
    from report import LINES
    if LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(LINES):
            terminalreporter.write_line(LINES[key])
