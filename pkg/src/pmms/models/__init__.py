from .domain import (
    ApId,
    DelayBreakdown,
    HandoffEvent,
    LoadClass,
    MobilePath,
    MobilityRule,
    PathHistory,
    PathStep,
    Point,
    RankedPrediction,
    RegionId,
    Reservation,
    ReservationStage,
    ReservationState,
    RssiSample,
    ThresholdEvent,
    TrafficType,
)

__all__ = [
    "ApId",
    "DelayBreakdown",
    "HandoffEvent",
    "LoadClass",
    "MobilePath",
    "MobilityRule",
    "PathHistory",
    "PathStep",
    "Point",
    "RankedPrediction",
    "RegionId",
    "Reservation",
    "ReservationStage",
    "ReservationState",
    "RssiSample",
    "ThresholdEvent",
    "TrafficType",
]
