from typing import Iterable

import numpy as np

from ..models.domain import ApId, MobilePath, RankedPrediction
from ..topology.grid import GridTopology
from .predictor_registry import PredictionContext, predictor_registry


def predict_ip(current: ApId, topo: GridTopology, rng: np.random.Generator) -> ApId:
    """Uniform draw over every neighbor of the current AP."""
    neighbors = sorted(topo.ap_neighbors[current])
    return neighbors[int(rng.integers(len(neighbors)))]


def ip_expected_accuracy(paths: Iterable[MobilePath], topo: GridTopology) -> float:
    """Analytic IP accuracy in percent: mean over transitions of 1 / |neighbors(current)|."""
    chances = [1.0 / len(topo.ap_neighbors[ap]) for path in paths for ap in path.aps[:-1]]
    return 100.0 * float(np.mean(chances)) if chances else float("nan")


@predictor_registry.register_predictor("ip")
def ignorant(ctx: PredictionContext) -> RankedPrediction:
    choice = predict_ip(ctx.current, ctx.topo, ctx.ip_rng)
    return RankedPrediction(candidates=((choice, 1.0 / len(ctx.topo.ap_neighbors[ctx.current])),), decisive=True)
