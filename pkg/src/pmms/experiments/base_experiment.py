from functools import cached_property
from typing import Dict, Optional, Tuple

import numpy as np
from loguru import logger

from ..core.config import SimConfig
from ..models.domain import MobilePath, PathHistory
from ..mobility.generator import generate_history
from ..prediction.predictor_data_mining import RuleSet, mine_rules
from ..prediction.predictor_transition_matrix import TransitionMatrix, build_tm
from ..topology.grid import GridTopology, build_grid

# spawn order is part of the seed contract: appending is safe, reordering changes every result
STREAM_NAMES = ("history", "test", "ip", "noise", "lt_error", "delay", "traffic")


def spawn_streams(cfg: SimConfig) -> Dict[str, np.random.Generator]:
    """
    Independent random streams spawned from the master seed.

    An explicit history_seed or test_seed replaces the spawned stream of that name.

    Args:
        cfg: Simulation configuration

    Returns:
        Mapping of stream name to generator
    """
    children = np.random.SeedSequence(cfg.seed).spawn(len(STREAM_NAMES))
    streams = {name: np.random.default_rng(child) for name, child in zip(STREAM_NAMES, children)}

    if cfg.history_seed is not None:
        streams["history"] = np.random.default_rng(cfg.history_seed)
    if cfg.test_seed is not None:
        streams["test"] = np.random.default_rng(cfg.test_seed)
    if cfg.history_seed is not None and cfg.history_seed == cfg.test_seed:
        logger.warning(f"history_seed == test_seed ({cfg.test_seed}): test paths repeat the start of the history")
    return streams


class BaseExperiment:
    """
    A base class for the experiment families.

    Holds the topology, the random streams and the lazily built corpus (history, rules, transition
    matrix, test paths) shared by every experiment run on one configuration. Subclasses implement `run`.
    """

    experiment_name: str = "base"

    def __init__(
        self,
        cfg: SimConfig,
        history: Optional[PathHistory] = None,
        progress: bool = False,
    ) -> None:
        """
        Args:
            cfg: Simulation configuration
            history: Mining corpus to use instead of generating one
            progress: Show progress bars
        """
        self.cfg = cfg
        self.progress = progress
        self.topo: GridTopology = build_grid(cfg.ap_rows, cfg.ap_cols, cfg.ap_spacing)
        self.streams = spawn_streams(cfg)
        self._history = history

        logger.info(f"Initialized {self.experiment_name} experiment (seed {cfg.seed})")

    @property
    def history(self) -> PathHistory:
        if self._history is None:
            seed = self.cfg.history_seed if self.cfg.history_seed is not None else self.cfg.seed
            self._history = generate_history(
                self.cfg.n_history,
                self.topo,
                self.cfg.mobility_config(history=True),
                self.streams["history"],
                seed=seed,
                progress=self.progress,
            )
        return self._history

    @cached_property
    def rules(self) -> RuleSet:
        return mine_rules(self.history, self.cfg.min_support, self.cfg.min_confidence, self.cfg.max_head_len)

    @cached_property
    def tm(self) -> TransitionMatrix:
        return build_tm(self.history)

    @cached_property
    def test_paths(self) -> Tuple[MobilePath, ...]:
        test = generate_history(
            self.cfg.n_test,
            self.topo,
            self.cfg.mobility_config(history=False),
            self.streams["test"],
            progress=self.progress,
        )
        return test.paths

    def run(self):
        raise NotImplementedError(f"{type(self).__name__} does not implement run()")
