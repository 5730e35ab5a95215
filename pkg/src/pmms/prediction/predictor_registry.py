import importlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from ..core.config import PredictionConfig
from ..core.exceptions import ExperimentException
from ..models.domain import ApId, RankedPrediction, RssiSample
from ..topology.grid import GridTopology


@dataclass
class PredictionContext:
    """
    Everything a predictor may look at for one transition.

    `candidates` is the intersection set without the current AP. `actual` is only read by the full-LT
    combination, which models continued sampling revealing whether LT was right. `lt` and `dm` cache
    the component answers so combinations reuse them.
    """

    topo: GridTopology
    cfg: PredictionConfig
    current: ApId
    prefix: Tuple[ApId, ...]
    candidates: FrozenSet[ApId] = frozenset()
    samples: Sequence[RssiSample] = ()
    rules: Optional[object] = None
    tm: Optional[object] = None
    ip_rng: Optional[np.random.Generator] = None
    actual: Optional[ApId] = None
    lt: Optional[RankedPrediction] = None
    dm: Optional[RankedPrediction] = None
    extras: Dict[str, object] = field(default_factory=dict)


Predictor = Callable[[PredictionContext], RankedPrediction]


class PredictorRegistry:
    """
    Registry for next-AP predictors using decorators.

    Predictor modules (predictor_*.py next to this file) register themselves on import.
    """

    def __init__(self) -> None:
        """Initialize the registry with empty predictor collections."""
        self.predictors: Dict[str, Predictor] = {}
        self._loaded_modules: List[str] = []

    def load_predictor_modules(
        self,
        predictors_directory: Optional[str] = None,
    ) -> List[str]:
        """
        Import all discovered predictor modules to register their predictors.

        Args:
            predictors_directory: Optional custom directory for predictor modules

        Returns:
            List of loaded predictor module names
        """
        loaded = []
        for module_name in self.discover_predictors(predictors_directory):
            if module_name in self._loaded_modules:
                continue
            try:
                importlib.import_module(f"..{module_name}", package=__name__)
                loaded.append(module_name)
                self._loaded_modules.append(module_name)
                logger.debug(f"Loaded predictor module: {module_name}")
            except ImportError as e:
                logger.error(f"Failed to load predictor module {module_name}: {e}")

        logger.debug(f"Available predictors: {sorted(self.predictors)}")
        return loaded

    def discover_predictors(
        self,
        predictors_directory: Optional[str] = None,
    ) -> List[str]:
        """
        Discover predictor modules.

        Args:
            predictors_directory: Optional custom directory. Defaults to the directory containing this file.

        Returns:
            Sorted list of module names
        """
        directory = Path(predictors_directory) if predictors_directory else Path(__file__).parent
        discovered = sorted(
            path.stem
            for path in directory.glob("predictor_*.py")
            if path.is_file() and path.name != "predictor_registry.py"
        )
        return discovered

    def register_predictor(self, name: str) -> Callable[[Predictor], Predictor]:
        """
        Decorator to register a predictor.

        Args:
            name: Name the experiments resolve the predictor by (e.g. 'lt', 'tm')

        Returns:
            The decorator function
        """

        def decorator(func: Predictor) -> Predictor:
            self.predictors[name] = func
            logger.debug(f"Registered predictor {name}")
            return func

        return decorator

    def get_predictor(self, name: str) -> Predictor:
        """
        Get a registered predictor, loading predictor modules on first use.

        Raises:
            ExperimentException: Unknown predictor name
        """
        if name not in self.predictors:
            self.load_predictor_modules()
        if name not in self.predictors:
            raise ExperimentException(f"Unknown predictor {name!r}; available: {sorted(self.predictors)}")
        return self.predictors[name]

    def list_predictors(self) -> List[str]:
        self.load_predictor_modules()
        return sorted(self.predictors)


# global predictor registry instance
predictor_registry = PredictorRegistry()
