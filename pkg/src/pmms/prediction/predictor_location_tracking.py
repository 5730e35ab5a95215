from typing import Sequence

from ..core.config import PredictionConfig
from ..models.domain import RankedPrediction, RssiSample
from .predictor_registry import PredictionContext, predictor_registry


def predict_lt(samples: Sequence[RssiSample], cfg: PredictionConfig) -> RankedPrediction:
    """
    Rank APs by RSSI of one sampling event.

    The answer is decisive only when the strongest reading clears the weak-signal floor and beats the
    runner-up by the relative margin; similar or weak readings leave the decision to data mining.

    Args:
        samples: Readings of one sampling event
        cfg: Prediction configuration (lt_floor, lt_margin)

    Returns:
        RankedPrediction with rssi as score
    """
    if not samples:
        return RankedPrediction()

    ranked = sorted(samples, key=lambda sample: (-sample.rssi, sample.ap))
    top = ranked[0].rssi
    decisive = top >= cfg.lt_floor
    if decisive and len(ranked) > 1:
        decisive = (top - ranked[1].rssi) / top >= cfg.lt_margin
    return RankedPrediction(candidates=tuple((sample.ap, sample.rssi) for sample in ranked), decisive=decisive)


@predictor_registry.register_predictor("lt")
def location_tracking(ctx: PredictionContext) -> RankedPrediction:
    if ctx.lt is None:
        samples = [s for s in ctx.samples if not ctx.candidates or s.ap in ctx.candidates]
        ctx.lt = predict_lt(samples, ctx.cfg)
    return ctx.lt
