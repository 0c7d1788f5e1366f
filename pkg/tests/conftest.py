import pytest

from cosettile import CosetSystem
from generators import RUNNING


@pytest.fixture
def running_example():
    return CosetSystem.from_pairs(RUNNING)
