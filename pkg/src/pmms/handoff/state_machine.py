from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional

import numpy as np
from loguru import logger

from ..core.config import DelayConfig, RadioConfig
from ..core.exceptions import (
    DuplicateReservationException,
    ProtocolOrderException,
    ReservationDeniedException,
)
from ..models.domain import (
    ApId,
    DelayBreakdown,
    HandoffEvent,
    Point,
    RankedPrediction,
    ReservationState,
    ThresholdEvent,
    TrafficType,
)
from ..radio.thresholds import first_event_index, rssi_trace
from ..reservation.ledger import ReservationLedger
from ..topology.grid import GridTopology
from .delays import (
    auth_delay,
    classify_load,
    load_surcharge,
    packet_delay_ms,
    prediction_penalty,
    reassoc_delay,
    scan_delay,
)
from .drops import overflow_packets


@dataclass
class HandoffContext:
    """
    Simulation state around one handoff of one mobile node.

    `position` is where the MN starts its approach to the next AP (its last waypoint). `pre_authenticated`
    holds the APs the MN authenticated with after its previous handoff.
    """

    topo: GridTopology
    delay_cfg: DelayConfig
    radio_cfg: RadioConfig
    path_id: int
    mn: int
    from_ap: Optional[ApId]
    to_ap: ApId
    position: Point
    now: int
    traffic: TrafficType = TrafficType.TEXT
    flow_bytes: int = 0
    pre_authenticated: FrozenSet[ApId] = frozenset()
    samples_per_move: int = 10
    noise_rng: Optional[np.random.Generator] = None
    handoff_cache: Dict[int, List[ApId]] = field(default_factory=dict)

    @property
    def flow_packets(self) -> int:
        return self.flow_bytes // self.delay_cfg.packet_size_bytes


def draw_attached(cfg: DelayConfig, rng: np.random.Generator) -> int:
    """Nodes attached to the target BSS at handoff time, the MN included."""
    return 1 + int(rng.poisson(cfg.background_load_mean))


def initial_association(ctx: HandoffContext, rng: np.random.Generator) -> HandoffEvent:
    """
    First attachment of an MN: full channel scan, shared-key authentication, association.

    No flow is running yet, so nothing is dropped and nothing is predicted.
    """
    cfg = ctx.delay_cfg
    attached = draw_attached(cfg, rng)
    load = classify_load(attached, cfg)

    delays = DelayBreakdown(
        scan_ms=scan_delay(True, cfg.n_channels, cfg, load, rng),
        auth_ms=auth_delay(True, load, cfg, rng),
        reassoc_ms=reassoc_delay(load, cfg.iapp_enabled, cfg, rng),
        load_ms=load_surcharge(load, cfg),
        packet_ms=packet_delay_ms(load, cfg),
        prediction_ms=0.0,
    )
    ctx.handoff_cache.setdefault(ctx.mn, []).append(ctx.to_ap)
    return HandoffEvent(
        path_id=ctx.path_id,
        tick=ctx.now,
        from_ap=None,
        to_ap=ctx.to_ap,
        predicted=ctx.to_ap,
        prediction_correct=True,
        delays=delays,
        packets_dropped=0,
        reserved_bytes_used=0,
        traffic=ctx.traffic,
        load_class=load,
        attached=attached,
        first_association=True,
    )


def _reserve(ledger: ReservationLedger, ctx: HandoffContext, ap: ApId, stage: int) -> None:
    try:
        if stage == 1:
            ledger.first_stage_reserve(ap, ctx.mn, ctx.now)
        else:
            ledger.second_stage_reserve(ap, ctx.mn, ctx.traffic, ctx.now)
    except ReservationDeniedException as e:
        logger.warning(f"Path {ctx.path_id}: {e}; handoff proceeds unreserved")
    except (DuplicateReservationException, ProtocolOrderException) as e:
        logger.debug(f"Path {ctx.path_id}: stage-{stage} skipped: {e}")


def execute_handoff(
    ctx: HandoffContext,
    prediction: RankedPrediction,
    ledger: Optional[ReservationLedger],
    rng: np.random.Generator,
) -> HandoffEvent:
    """
    Run one handoff through the pre-mobile, mobile and post-mobile stages.

    Pre-mobile: the approach trace raises Warning (predict, first-stage reservation on the predicted AP)
    and HandoffReady (second-stage reservation). Mobile: scan, authentication, reassociation, load,
    packet and misprediction delays. Post-mobile: a correct prediction that saw HandoffReady confirms the
    reservation and its buffer absorbs overflow packets; anything else is left to its timer. The step is appended to the
    handoff cache.

    Args:
        ctx: Handoff context
        prediction: Next-AP prediction of the tracker
        ledger: Reservation ledger, None to run without reservation
        rng: Delay and load random stream

    Returns:
        HandoffEvent
    """
    cfg = ctx.delay_cfg
    attached = draw_attached(cfg, rng)
    load = classify_load(attached, cfg)
    predicted = prediction.top
    correct = predicted == ctx.to_ap

    if ctx.from_ap is None or ctx.to_ap not in ctx.topo.ap_neighbors[ctx.from_ap]:
        logger.warning(f"Path {ctx.path_id}: AP {ctx.to_ap} unreachable from AP {ctx.from_ap}, handoff failed")
        return HandoffEvent(
            path_id=ctx.path_id,
            tick=ctx.now,
            from_ap=ctx.from_ap,
            to_ap=ctx.to_ap,
            predicted=predicted,
            prediction_correct=correct,
            delays=DelayBreakdown(),
            packets_dropped=ctx.flow_packets,
            reserved_bytes_used=0,
            traffic=ctx.traffic,
            load_class=load,
            attached=attached,
            failed=True,
            overflow_packets=ctx.flow_packets,
        )

    # pre-mobile: threshold events along the approach to the next AP
    trace = rssi_trace(
        ctx.position, ctx.to_ap, ctx.from_ap, ctx.topo, ctx.radio_cfg, ctx.samples_per_move, ctx.noise_rng
    )
    emergency = first_event_index(trace, ThresholdEvent.HANDOFF_READY) is None
    if emergency:
        logger.debug(f"Path {ctx.path_id}: no HandoffReady before AP {ctx.to_ap}, MN-initiated handoff")

    reserved = 0
    if ledger is not None:
        if emergency:
            ledger.release_emergency(ctx.to_ap)
        if predicted is not None:
            _reserve(ledger, ctx, predicted, stage=1)
            if not emergency:
                _reserve(ledger, ctx, predicted, stage=2)
        # without HandoffReady the new AP never confirms; the stage-1 hold runs out on its timer
        if correct and not emergency:
            ledger.confirm(ctx.mn, ctx.to_ap, True, ctx.now)
            reserved = ledger.reserved_bytes(ctx.mn, ctx.to_ap, ReservationState.ACTIVE)

    # mobile: delay components; a full exchange with an AP that was not pre-authenticated only follows a
    # misprediction and is charged once, inside the prediction penalty
    pre_authenticated = ctx.to_ap in ctx.pre_authenticated
    delays = DelayBreakdown(
        scan_ms=scan_delay(False, cfg.n_channels, cfg, load, rng),
        auth_ms=auth_delay(False, load, cfg, rng),
        reassoc_ms=reassoc_delay(load, cfg.iapp_enabled, cfg, rng),
        load_ms=load_surcharge(load, cfg),
        packet_ms=packet_delay_ms(load, cfg),
        prediction_ms=prediction_penalty(correct, cfg, load, rng, pre_authenticated),
    )

    # post-mobile: buffered packets survive the gap
    overflow = min(overflow_packets(delays.total_ms, cfg.drop_threshold_ms, cfg.proc_rate_per_ms), ctx.flow_packets)
    buffered = reserved // cfg.packet_size_bytes
    dropped = max(0, overflow - buffered)

    ctx.handoff_cache.setdefault(ctx.mn, []).append(ctx.to_ap)
    return HandoffEvent(
        path_id=ctx.path_id,
        tick=ctx.now,
        from_ap=ctx.from_ap,
        to_ap=ctx.to_ap,
        predicted=predicted,
        prediction_correct=correct,
        delays=delays,
        packets_dropped=dropped,
        reserved_bytes_used=reserved,
        traffic=ctx.traffic,
        load_class=load,
        attached=attached,
        emergency=emergency,
        overflow_packets=overflow,
    )
