from ..models.domain import RankedPrediction
from .predictor_registry import PredictionContext, predictor_registry


def predict_ltdmps(lt: RankedPrediction, dm: RankedPrediction, lt_observed_wrong: bool) -> RankedPrediction:
    """Use location tracking when it is decisive and not seen to be wrong, data mining otherwise."""
    if lt.decisive and not lt.is_empty and not lt_observed_wrong:
        return lt
    return dm


@predictor_registry.register_predictor("ltdmps_partial")
def ltdmps_partial(ctx: PredictionContext) -> RankedPrediction:
    lt = predictor_registry.get_predictor("lt")(ctx)
    dm = predictor_registry.get_predictor("dm")(ctx)
    return predict_ltdmps(lt, dm, lt_observed_wrong=False)


@predictor_registry.register_predictor("ltdmps_full")
def ltdmps_full(ctx: PredictionContext) -> RankedPrediction:
    # continued sampling until handoff settles LT: it always commits and its error becomes known
    lt = predictor_registry.get_predictor("lt")(ctx)
    dm = predictor_registry.get_predictor("dm")(ctx)
    if lt.is_empty or ctx.actual is None:
        return predict_ltdmps(lt, dm, lt_observed_wrong=False)
    return predict_ltdmps(lt.model_copy(update={"decisive": True}), dm, lt_observed_wrong=lt.top != ctx.actual)
