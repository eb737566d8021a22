import numpy as np
import pytest

from chsh_games import witnesses
from chsh_games.config import OptimizeConfig
from chsh_games.game import parse_game
from chsh_games.quantum import make_epr, make_ghz, make_ghz_phase, make_w


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def chsh():
    return parse_game(witnesses.CHSH, 2)


@pytest.fixture
def epr():
    return make_epr()


@pytest.fixture
def ghz():
    return make_ghz(3)


@pytest.fixture
def ghz_j():
    return make_ghz_phase(3)


@pytest.fixture
def w_state():
    return make_w(3)


@pytest.fixture
def small_config():
    return OptimizeConfig(restarts=4, max_evals=800, screen_samples=50, seed=7)
