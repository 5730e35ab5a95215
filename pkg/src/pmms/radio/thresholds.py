from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from ..core.config import RadioConfig
from ..models.domain import ApId, Point, ThresholdEvent
from ..topology.grid import GridTopology, distance, interpolate
from .propagation import apply_noise, reported_rssi


def classify_threshold(current_ap_rssi: float, best_next_rssi: float, cfg: RadioConfig) -> ThresholdEvent:
    """
    Classify a (current AP, best next AP) reading pair.

    HandoffReady needs both the current AP inside or below the handoff band and the next AP at or above
    the high threshold; Warning only needs the current AP inside or below the warning band.
    """
    if current_ap_rssi <= cfg.rssi_handoff_band[1] and best_next_rssi >= cfg.next_handoff_threshold:
        return ThresholdEvent.HANDOFF_READY
    if current_ap_rssi <= cfg.rssi_warning_band[1]:
        return ThresholdEvent.WARNING
    return ThresholdEvent.NONE


@dataclass(frozen=True, slots=True)
class TraceSample:
    index: int
    position: Point
    current_rssi: float
    next_rssi: float
    event: ThresholdEvent


def rssi_trace(
    start: Point,
    target_ap: ApId,
    current_ap: ApId,
    topo: GridTopology,
    cfg: RadioConfig,
    n_samples: int,
    rng: Optional[np.random.Generator] = None,
) -> List[TraceSample]:
    """
    Reported RSSI of the current and the next AP while the MN approaches the next AP.

    Samples are taken at fractions 1/(n+1), ..., n/(n+1) of the way from `start` to the next AP,
    so the MN never reaches the antenna within the trace.
    """
    target = topo.ap_positions[target_ap]
    trace = []
    for index in range(n_samples):
        position = interpolate(start, target, (index + 1) / (n_samples + 1))
        current = apply_noise(reported_rssi(cfg, distance(position, current_ap, topo)), cfg, rng)
        nxt = apply_noise(reported_rssi(cfg, distance(position, target_ap, topo)), cfg, rng)
        trace.append(TraceSample(index, position, current, nxt, classify_threshold(current, nxt, cfg)))
    return trace


def first_event_index(trace: List[TraceSample], event: ThresholdEvent) -> Optional[int]:
    """Index of the first sample whose event is `event` or a later stage of it."""
    order = [ThresholdEvent.NONE, ThresholdEvent.WARNING, ThresholdEvent.HANDOFF_READY]
    for sample in trace:
        if order.index(sample.event) >= order.index(event):
            return sample.index
    return None
