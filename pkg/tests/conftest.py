from typing import List

import numpy as np
import pytest
from loguru import logger

from pmms.core.config import SimConfig
from pmms.mobility.generator import generate_history
from pmms.prediction.predictor_data_mining import mine_rules
from pmms.prediction.predictor_transition_matrix import build_tm
from pmms.topology.grid import build_grid


@pytest.fixture
def topo():
    return build_grid()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def small_cfg() -> SimConfig:
    return SimConfig(seed=11, n_history=400, n_test=40)


@pytest.fixture
def small_history(topo, small_cfg):
    return generate_history(
        small_cfg.n_history, topo, small_cfg.mobility_config(history=True), np.random.default_rng(5), seed=5
    )


@pytest.fixture
def small_rules(small_history):
    return mine_rules(small_history)


@pytest.fixture
def small_tm(small_history):
    return build_tm(small_history)


@pytest.fixture
def log_messages() -> List[str]:
    """Messages logged at WARNING or above while the test runs."""
    messages: List[str] = []
    handler_id = logger.add(lambda message: messages.append(str(message)), level="WARNING", format="{message}")
    yield messages
    logger.remove(handler_id)
