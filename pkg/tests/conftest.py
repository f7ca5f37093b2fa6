import pytest
from hypothesis import settings

from centerseg import sample_document
from centerseg.segmenter import run
from helpers import replay

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def sample_doc():
    return sample_document()


@pytest.fixture(scope="session")
def sample_trace(sample_doc):
    return run(sample_doc)


@pytest.fixture(scope="session")
def sample_replay(sample_doc):
    return replay(sample_doc)


# one PASS/FAIL line per acceptance criterion, collected by test_acceptance
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
