from collections import Counter
from typing import Dict, Optional, Sequence

from ..models.domain import ApId, RankedPrediction

UNRANKED = "unranked"


def frequency_rank(pred: RankedPrediction, actual: ApId) -> Optional[int]:
    """1-based position of `actual` in the candidates, None when it is not listed."""
    for position, ap in enumerate(pred.ap_ids, start=1):
        if ap == actual:
            return position
    return None


def is_correct(pred: RankedPrediction, actual: ApId) -> bool:
    rank = frequency_rank(pred, actual)
    return rank is not None and rank <= pred.width


def path_accuracy(predictions: Sequence[RankedPrediction], actuals: Sequence[ApId]) -> Optional[float]:
    """
    Percentage of transitions predicted correctly. The first AP of a path is given, not predicted.

    Returns:
        Accuracy in percent, or None for a path without transitions
    """
    if len(predictions) != len(actuals):
        raise ValueError(f"{len(predictions)} predictions for {len(actuals)} transitions")
    if not actuals:
        return None
    hits = sum(is_correct(pred, actual) for pred, actual in zip(predictions, actuals))
    return 100.0 * hits / len(actuals)


def rank_histogram(ranks: Sequence[Optional[int]]) -> Dict[str, int]:
    """Counts per rank, with absent ranks in a separate bucket."""
    counts = Counter(str(rank) if rank is not None else UNRANKED for rank in ranks)
    ordered = sorted((key for key in counts if key != UNRANKED), key=int)
    histogram = {key: counts[key] for key in ordered}
    if UNRANKED in counts:
        histogram[UNRANKED] = counts[UNRANKED]
    return histogram
