from __future__ import annotations

import pytest

from llesym.clifford import build_rep
from llesym.graded import bracket_table, get_spec
from llesym.model import build_catalog


@pytest.fixture(scope="session")
def dirac():
    return build_rep("dirac")


@pytest.fixture(scope="session")
def chiral():
    return build_rep("chiral")


@pytest.fixture(scope="session")
def catalog(dirac):
    return build_catalog(dirac)


@pytest.fixture(scope="session")
def chiral_catalog(chiral):
    return build_catalog(chiral)


@pytest.fixture(scope="session")
def super_table(catalog):
    return bracket_table(get_spec("super"), catalog)


@pytest.fixture(scope="session")
def z2z2_table(catalog):
    return bracket_table(get_spec("z2z2"), catalog)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
