from typing import Optional

import numpy as np

from ..core.config import PredictionConfig, RadioConfig
from ..models.domain import MobilePath, Point, RankedPrediction, RegionId
from ..radio.propagation import sample_rssi
from ..topology.grid import GridTopology, candidate_next_aps, interpolate, region_center, region_entry_fraction
from .predictor_location_tracking import location_tracking
from .predictor_registry import PredictionContext


def lt_sample_point(start: Point, end: Point, region: RegionId, topo: GridTopology, fraction: float) -> Point:
    """
    Where the tracker samples RSSI for a move: `fraction` of the way from the point the MN enters the
    next region to the waypoint it pauses at.
    """
    entry = region_entry_fraction(start, end, region, topo)
    entry = 0.0 if entry is None else entry
    return interpolate(start, end, entry + fraction * (1.0 - entry))


def inject_lt_error(lt: RankedPrediction, rate: float, rng: np.random.Generator) -> RankedPrediction:
    """
    Replace a decisive LT answer by another of its candidates with probability `rate`.

    Two draws per call whatever the outcome, so the stream stays aligned across runs.
    """
    draw = float(rng.random())
    pick = float(rng.random())
    if not lt.decisive or len(lt.candidates) < 2 or draw >= rate:
        return lt
    others = lt.candidates[1:]
    wrong = others[min(int(pick * len(others)), len(others) - 1)]
    reordered = (wrong,) + tuple(candidate for candidate in lt.candidates if candidate != wrong)
    return lt.model_copy(update={"candidates": reordered})


def transition_context(
    path: MobilePath,
    index: int,
    topo: GridTopology,
    prediction_cfg: PredictionConfig,
    radio_cfg: RadioConfig,
    rules=None,
    tm=None,
    ip_rng: Optional[np.random.Generator] = None,
    noise_rng: Optional[np.random.Generator] = None,
    lt_error_rng: Optional[np.random.Generator] = None,
) -> PredictionContext:
    """
    Prediction context for the move from step `index` to step `index + 1` of a path.

    Candidates are candidate_next_aps(current AP, next region), which includes the current AP, minus the
    current AP itself: a recorded move always changes AP, so the "no handoff" answer is never the target.
    The tracker's samples are taken at the LT sample point of the move.
    """
    current, following = path.steps[index], path.steps[index + 1]
    start = current.waypoint or region_center(current.region, topo)
    end = following.waypoint or region_center(following.region, topo)

    point = lt_sample_point(start, end, following.region, topo, prediction_cfg.lt_sample_fraction)
    samples = sample_rssi(point, topo, following.region, radio_cfg, noise_rng, timestamp=index)

    ctx = PredictionContext(
        topo=topo,
        cfg=prediction_cfg,
        current=current.ap,
        prefix=path.aps[: index + 1],
        # the walk only records a step when the AP changes
        candidates=candidate_next_aps(current.ap, following.region, topo) - {current.ap},
        samples=samples,
        rules=rules,
        tm=tm,
        ip_rng=ip_rng,
        actual=following.ap,
    )
    if lt_error_rng is not None:
        ctx.lt = inject_lt_error(location_tracking(ctx), prediction_cfg.lt_error_rate, lt_error_rng)
    return ctx
