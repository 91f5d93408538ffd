import pytest

from rbsdlab import elliptic as ell
from rbsdlab import modsym as ms


@pytest.fixture(scope="session")
def f11():
    return ms.attach_symbols(ell.curve("11a1"))


@pytest.fixture(scope="session")
def f37():
    return ms.attach_symbols(ell.curve("37a1"))


@pytest.fixture(scope="session")
def functional_for():
    cache = {}

    def get(label):
        if label not in cache:
            cache[label] = ms.attach_symbols(ell.curve(label))
        return cache[label]

    return get
