import sys
from pathlib import Path

import pytest

from itnkit.domain import bundled_locale

TESTS = Path(__file__).parent
FIXTURES = TESTS / "fixtures"
sys.path.insert(0, str(TESTS))  # oracles.py, synthetic.py


@pytest.fixture(scope="session")
def en():
    return bundled_locale("en")


@pytest.fixture(scope="session")
def fr():
    return bundled_locale("fr")


@pytest.fixture(scope="session")
def de():
    return bundled_locale("de")


@pytest.fixture(scope="session")
def it():
    return bundled_locale("it")


@pytest.fixture(scope="session")
def fixtures():
    return FIXTURES
