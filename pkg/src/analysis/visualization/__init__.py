from .handoff_viz import HandoffVisualizationGenerator
from .prediction_viz import PredictionVisualizationGenerator

__all__ = [
    "HandoffVisualizationGenerator",
    "PredictionVisualizationGenerator",
]
