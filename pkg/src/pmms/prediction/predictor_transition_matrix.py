from collections import Counter, defaultdict
from pathlib import Path
from typing import Dict, Tuple, Union

import pandas as pd
from loguru import logger

from ..core.exceptions import ConfigurationException, ReportIOException
from ..models.domain import ApId, PathHistory, RankedPrediction
from .predictor_registry import PredictionContext, predictor_registry


class TransitionMatrix:
    """
    First-order cell-to-cell transition counts with row-normalized probabilities on demand.
    """

    def __init__(self, counts: Dict[Tuple[ApId, ApId], int]) -> None:
        self.counts: Dict[Tuple[ApId, ApId], int] = dict(counts)
        self._rows: Dict[ApId, Dict[ApId, int]] = defaultdict(dict)
        for (source, target), count in self.counts.items():
            self._rows[source][target] = count

    def row(self, source: ApId) -> Dict[ApId, int]:
        return dict(self._rows.get(source, {}))

    def probabilities(self, source: ApId) -> Dict[ApId, float]:
        row = self._rows.get(source, {})
        total = sum(row.values())
        return {target: count / total for target, count in row.items()} if total else {}

    @property
    def sources(self):
        return sorted(self._rows)

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {"from_ap": source, "to_ap": target, "count": count, "probability": self.probabilities(source)[target]}
            for (source, target), count in sorted(self.counts.items())
        ]
        return pd.DataFrame(rows, columns=["from_ap", "to_ap", "count", "probability"])


def build_tm(history: PathHistory) -> TransitionMatrix:
    counts: Counter = Counter()
    for path in history.paths:
        aps = path.aps
        counts.update(zip(aps, aps[1:]))
    logger.info(f"Built transition matrix with {len(counts)} transitions from {len(history)} paths")
    return TransitionMatrix(counts)


def predict_tm(tm: TransitionMatrix, current: ApId, x: int = 1) -> RankedPrediction:
    """
    Rank the outgoing transitions of `current` by count, ties by ascending ApId.

    The full ranking is returned so frequency ranks past x stay observable; `width` records x.

    Args:
        tm: Transition matrix
        current: Current AP
        x: Number of most likely cells the predictor commits to (>= 1)

    Returns:
        RankedPrediction scored by transition probability
    """
    if x < 1:
        raise ConfigurationException(f"x must be >= 1, got {x}")
    probabilities = tm.probabilities(current)
    if not probabilities:
        return RankedPrediction(width=x)
    ranked = sorted(tm.row(current).items(), key=lambda item: (-item[1], item[0]))
    return RankedPrediction(
        candidates=tuple((target, probabilities[target]) for target, _ in ranked),
        decisive=True,
        width=x,
    )


def save_tm(tm: TransitionMatrix, sink: Union[str, Path]) -> None:
    try:
        tm.to_frame().to_csv(sink, index=False, lineterminator="\n")
    except OSError as e:
        raise ReportIOException(str(e), str(sink)) from e


@predictor_registry.register_predictor("tm")
def transition_matrix(ctx: PredictionContext) -> RankedPrediction:
    return predict_tm(ctx.tm, ctx.current, ctx.cfg.tm_top_x)
