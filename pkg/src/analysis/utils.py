import json
from pathlib import Path
from typing import Dict

import numpy as np


def save_metrics(metrics: Dict, output_dir: Path, prefix: str = ""):
    """Save metrics to JSON file"""
    output_path = output_dir / f"{prefix}metrics.json"
    with open(output_path, "w") as f:
        json.dump(_to_builtin(metrics), f, indent=4)


def _to_builtin(data):
    """Convert numpy scalars and NaN to JSON-friendly values"""
    if isinstance(data, dict):
        return {str(key): _to_builtin(value) for key, value in data.items()}
    if isinstance(data, (list, tuple)):
        return [_to_builtin(value) for value in data]
    if isinstance(data, np.generic):
        data = data.item()
    if isinstance(data, float) and np.isnan(data):
        return None
    return data


def setup_output_directories(base_dir: Path) -> Dict[str, Path]:
    """Create and return output directories"""
    directories = {
        "output": base_dir / "analysis",
        "viz": base_dir / "analysis" / "visualizations",
        "prediction": base_dir / "analysis" / "visualizations" / "prediction",
        "handoff": base_dir / "analysis" / "visualizations" / "handoff",
    }

    for directory in directories.values():
        directory.mkdir(exist_ok=True, parents=True)

    return directories
