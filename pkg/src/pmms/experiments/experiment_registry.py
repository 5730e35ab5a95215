import importlib
from pathlib import Path
from typing import Callable, Dict, List, Optional, Type

from loguru import logger

from ..core.exceptions import ExperimentException


class ExperimentRegistry:
    """
    Registry for experiment families using decorators.

    Experiment modules (experiment_*.py next to this file) register their experiment class on import.
    """

    def __init__(self) -> None:
        """Initialize the registry with empty experiment collections."""
        self.experiments: Dict[str, Type] = {}
        self._loaded_modules: List[str] = []

    def load_experiment_modules(
        self,
        experiments_directory: Optional[str] = None,
    ) -> List[str]:
        """
        Import all discovered experiment modules to register their experiments.

        Args:
            experiments_directory: Optional custom directory for experiment modules

        Returns:
            List of loaded experiment module names
        """
        loaded = []
        for module_name in self.discover_experiments(experiments_directory):
            if module_name in self._loaded_modules:
                continue
            try:
                importlib.import_module(f"..{module_name}", package=__name__)
                loaded.append(module_name)
                self._loaded_modules.append(module_name)
                logger.debug(f"Loaded experiment module: {module_name}")
            except ImportError as e:
                logger.error(f"Failed to load experiment module {module_name}: {e}")

        return loaded

    def discover_experiments(
        self,
        experiments_directory: Optional[str] = None,
    ) -> List[str]:
        """
        Discover experiment modules.

        Args:
            experiments_directory: Optional custom directory. Defaults to the directory containing this file.

        Returns:
            Sorted list of module names
        """
        directory = Path(experiments_directory) if experiments_directory else Path(__file__).parent
        return sorted(
            path.stem
            for path in directory.glob("experiment_*.py")
            if path.is_file() and path.name != "experiment_registry.py"
        )

    def register_experiment(self, name: str) -> Callable[[Type], Type]:
        """
        Decorator to register an experiment class.

        Args:
            name: Name the CLI resolves the experiment by (e.g. 'accuracy')

        Returns:
            The decorator function
        """

        def decorator(cls: Type) -> Type:
            self.experiments[name] = cls
            cls.experiment_name = name
            logger.debug(f"Registered experiment {name}")
            return cls

        return decorator

    def get_experiment(self, name: str) -> Type:
        """
        Get a registered experiment class, loading experiment modules on first use.

        Raises:
            ExperimentException: Unknown experiment name
        """
        if name not in self.experiments:
            self.load_experiment_modules()
        if name not in self.experiments:
            raise ExperimentException(f"Unknown experiment {name!r}; available: {sorted(self.experiments)}")
        return self.experiments[name]

    def list_experiments(self) -> List[str]:
        self.load_experiment_modules()
        return sorted(self.experiments)


# global experiment registry instance
experiment_registry = ExperimentRegistry()
