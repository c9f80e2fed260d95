import numpy as np
import pytest

from synchrolab import cerny_automaton


@pytest.fixture
def cerny4():
    return cerny_automaton(4)


@pytest.fixture
def rng():
    return np.random.default_rng(0xC0FFEE)
