# conftest.py

import pytest

from twoclosure.perm import Permutation, PermutationGroup
from twoclosure.settings import Settings


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run search-heavy instances")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: search-heavy instances, run with --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def settings() -> Settings:
    return Settings()


@pytest.fixture
def d5() -> PermutationGroup:
    """Dihedral group of the pentagon: rank 3 with subdegrees 2, 2."""
    return PermutationGroup(
        5,
        [Permutation.from_cycles(5, [(0, 1, 2, 3, 4)]), Permutation.from_cycles(5, [(1, 4), (2, 3)])],
    )


@pytest.fixture
def d4() -> PermutationGroup:
    """Dihedral group of the square: imprimitive rank 3 with blocks {0, 2}, {1, 3}."""
    return PermutationGroup(
        4,
        [Permutation.from_cycles(4, [(0, 1, 2, 3)]), Permutation.from_cycles(4, [(1, 3)])],
    )
