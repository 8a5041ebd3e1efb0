import random

import pytest

from grasslines.pencil import g14_pencil, g15_pencil
from grasslines.section_model import SectionSpace


@pytest.fixture(scope="session")
def X():
    return SectionSpace(g14_pencil())


@pytest.fixture(scope="session")
def Y():
    return SectionSpace(g15_pencil())


@pytest.fixture
def rng(request):
    return random.Random(request.node.name)


def e(n, *idx):
    return tuple(int(i in idx) for i in range(n))
