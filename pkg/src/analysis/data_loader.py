from pathlib import Path
from typing import Dict, Optional

import pandas as pd
from loguru import logger

REPORT_FILES = {
    "accuracy": "accuracy.csv",
    "ranks": "rank_histogram.csv",
    "delay": "delay.csv",
    "events": "events.csv",
    "drops": "drops.csv",
    "ledger": "ledger.csv",
    "rssi_trace": "rssi_trace.csv",
}


class DataLoader:
    """Loads the CSV reports a simulator run wrote to one results directory"""

    def __init__(self, results_path: str):
        """
        Initialize loader with path to results directory

        Args:
            results_path: Directory holding the CSVs written by `pmms all` (or single subcommands)
        """
        self.results_path = Path(results_path)
        if not self.results_path.is_dir():
            raise FileNotFoundError(f"No results directory at {self.results_path}")
        self._frames: Dict[str, Optional[pd.DataFrame]] = {}

    def load(self, name: str) -> Optional[pd.DataFrame]:
        """
        Load one report by its short name, caching the result.

        Returns:
            The report, or None when the run did not write it
        """
        if name not in self._frames:
            path = self.results_path / REPORT_FILES[name]
            if path.exists():
                self._frames[name] = pd.read_csv(path)
                logger.debug(f"Loaded {len(self._frames[name])} rows from {path}")
            else:
                logger.warning(f"{path.name} not found in {self.results_path}, skipping")
                self._frames[name] = None
        return self._frames[name]

    def path_rows(self, name: str) -> Optional[pd.DataFrame]:
        """Per-path rows of a report with summary rows dropped."""
        frame = self.load(name)
        if frame is None:
            return None
        return frame[frame["row_type"] == "path"].reset_index(drop=True)

    def summary_row(self, name: str, row_type: str = "summary") -> Optional[pd.DataFrame]:
        frame = self.load(name)
        if frame is None:
            return None
        return frame[frame["row_type"] == row_type].reset_index(drop=True)

    def available(self) -> Dict[str, bool]:
        return {name: (self.results_path / file_name).exists() for name, file_name in REPORT_FILES.items()}
