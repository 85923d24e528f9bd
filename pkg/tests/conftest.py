import numpy as np
import pytest

from monotone_markov_models import RandomnessStream
from monotone_markov_models.distributions import dkw_band
from monotone_markov_models.models import load_preset, preset_file

MC_PATHS = 10_000


@pytest.fixture
def stream():
    return RandomnessStream(master_seed=20240607)


@pytest.fixture
def mc_tolerance():
    """Four DKW bands at 10^4 samples and confidence 0.999."""
    return 4.0 * dkw_band(MC_PATHS, 0.999)


@pytest.fixture
def wage_model():
    return load_preset("wage")


@pytest.fixture
def wage_config():
    return preset_file("wage").wage


@pytest.fixture
def belief_config():
    return preset_file("belief").belief


@pytest.fixture
def pareto_config():
    return preset_file("income-pareto").pure_jump_income


@pytest.fixture
def income_jump_config():
    return preset_file("income-jump").pure_jump_income


@pytest.fixture
def drift_config():
    return preset_file("income-drift").drift_income


@pytest.fixture
def drift_reset_config():
    return preset_file("drift-reset").drift_income


@pytest.fixture
def ou_config():
    return preset_file("ou").ou


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
