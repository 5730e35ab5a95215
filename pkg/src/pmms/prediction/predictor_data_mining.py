from collections import Counter, defaultdict
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple, Union

import pandas as pd
from loguru import logger

from ..core.exceptions import ConfigurationException, ReportIOException
from ..models.domain import ApId, MobilityRule, PathHistory, RankedPrediction
from .predictor_registry import PredictionContext, predictor_registry

RULE_COLUMNS = ["head", "tail", "support", "confidence"]


class RuleSet:
    """
    Mined mobility rules indexed by head. Immutable after construction.
    """

    def __init__(self, rules: Iterable[MobilityRule]) -> None:
        self._rules: FrozenSet[MobilityRule] = frozenset(rules)
        self._by_head: Dict[Tuple[ApId, ...], List[MobilityRule]] = defaultdict(list)
        for rule in self._rules:
            self._by_head[rule.head].append(rule)
        self.max_head_len = max((len(rule.head) for rule in self._rules), default=0)

    def __iter__(self) -> Iterator[MobilityRule]:
        return iter(sorted(self._rules, key=lambda rule: (rule.head, rule.tail)))

    def __len__(self) -> int:
        return len(self._rules)

    def __contains__(self, rule: object) -> bool:
        return rule in self._rules

    def as_set(self) -> FrozenSet[MobilityRule]:
        return self._rules

    def with_head(self, head: Tuple[ApId, ...]) -> List[MobilityRule]:
        return self._by_head.get(head, [])


def count_patterns(history: PathHistory, max_head_len: int) -> Counter:
    """Occurrences of every contiguous (head, tail) pair with 1 <= len(head) <= max_head_len."""
    counts: Counter = Counter()
    for path in history.paths:
        aps = path.aps
        for end in range(1, len(aps)):
            for head_len in range(1, min(max_head_len, end) + 1):
                counts[(aps[end - head_len : end], aps[end])] += 1
    return counts


def mine_rules(
    history: PathHistory,
    min_support: int = 2,
    min_confidence: float = 0.10,
    max_head_len: int = 4,
) -> RuleSet:
    """
    Mine mobility rules head -> tail from contiguous AP subsequences.

    support(head + tail) counts occurrences; support(head) counts occurrences of the head that have a
    successor, so the confidences of one head sum to 1.

    Args:
        history: Mining corpus
        min_support: Minimum occurrences of head + tail (>= 1)
        min_confidence: Minimum confidence
        max_head_len: Longest head considered

    Returns:
        RuleSet
    """
    if min_support < 1:
        raise ConfigurationException(f"min_support must be >= 1, got {min_support}")
    if max_head_len < 1:
        raise ConfigurationException(f"max_head_len must be >= 1, got {max_head_len}")

    counts = count_patterns(history, max_head_len)
    head_support: Counter = Counter()
    for (head, _), count in counts.items():
        head_support[head] += count

    rules = []
    for (head, tail), count in counts.items():
        confidence = count / head_support[head]
        if count >= min_support and confidence >= min_confidence:
            rules.append(MobilityRule(head=head, tail=tail, support=count, confidence=confidence))

    logger.info(f"Mined {len(rules)} rules from {len(history)} paths ({len(counts)} patterns)")
    return RuleSet(rules)


def predict_dm(
    rules: Union[RuleSet, Iterable[MobilityRule]],
    path_prefix: Tuple[ApId, ...],
    candidates: Optional[Set[ApId]] = None,
) -> RankedPrediction:
    """
    Rank next APs by the rules whose head is a suffix of the path so far.

    Each tail keeps its best rule under (head length, confidence, support); tails are ordered by that key
    and then by ascending ApId. The score is head length + confidence. Not decisive when no rule matches.

    Args:
        rules: Mined rules
        path_prefix: APs visited so far, current AP last
        candidates: Allowed tails; unrestricted when empty or None

    Returns:
        RankedPrediction
    """
    if not isinstance(rules, RuleSet):
        rules = RuleSet(rules)

    best: Dict[ApId, MobilityRule] = {}
    for head_len in range(1, min(rules.max_head_len, len(path_prefix)) + 1):
        for rule in rules.with_head(tuple(path_prefix[-head_len:])):
            if candidates and rule.tail not in candidates:
                continue
            current = best.get(rule.tail)
            if current is None or _rule_key(rule) > _rule_key(current):
                best[rule.tail] = rule

    if not best:
        return RankedPrediction()

    ranked = sorted(best.values(), key=lambda rule: (tuple(-k for k in _rule_key(rule)), rule.tail))
    return RankedPrediction(
        candidates=tuple((rule.tail, len(rule.head) + rule.confidence) for rule in ranked),
        decisive=True,
    )


def _rule_key(rule: MobilityRule) -> Tuple[int, float, int]:
    return (len(rule.head), rule.confidence, rule.support)


def rules_to_frame(rules: RuleSet) -> pd.DataFrame:
    rows = [
        {
            "head": "-".join(str(ap) for ap in rule.head),
            "tail": rule.tail,
            "support": rule.support,
            "confidence": rule.confidence,
        }
        for rule in rules
    ]
    return pd.DataFrame(rows, columns=RULE_COLUMNS)


def save_rules(rules: RuleSet, sink: Union[str, Path]) -> None:
    """Export rules as `head;tail;support;confidence` with heads written `a-b-c`."""
    try:
        rules_to_frame(rules).to_csv(sink, sep=";", index=False, lineterminator="\n")
    except OSError as e:
        raise ReportIOException(str(e), str(sink)) from e


def load_rules(source: Union[str, Path]) -> RuleSet:
    try:
        frame = pd.read_csv(source, sep=";", dtype={"head": str}, float_precision="round_trip")
    except OSError as e:
        raise ReportIOException(str(e), str(source)) from e
    return RuleSet(
        MobilityRule(
            head=tuple(int(ap) for ap in str(row.head).split("-")),
            tail=int(row.tail),
            support=int(row.support),
            confidence=float(row.confidence),
        )
        for row in frame.itertuples(index=False)
    )


@predictor_registry.register_predictor("dm")
def data_mining(ctx: PredictionContext) -> RankedPrediction:
    if ctx.dm is None:
        if len(ctx.candidates) == 1:
            # a single reachable AP is the answer without consulting the rules
            (only,) = ctx.candidates
            ctx.dm = RankedPrediction(candidates=((only, 1.0),), decisive=True)
        else:
            ctx.dm = predict_dm(ctx.rules, ctx.prefix, ctx.candidates)
    return ctx.dm
