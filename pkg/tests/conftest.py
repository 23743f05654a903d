import pytest

from aisemiring.catalog import default_catalog
from aisemiring.satisfaction import build_corpus


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


@pytest.fixture(scope="session")
def corpus():
    return build_corpus(3, 3, 3)


@pytest.fixture(scope="session")
def small_corpus():
    return build_corpus(2, 2, 2)
