from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

ApId = int
RegionId = int
Point = Tuple[float, float]


class ThresholdEvent(str, Enum):
    """RSSI threshold state of the current/next AP pair."""

    NONE = "none"
    WARNING = "warning"
    HANDOFF_READY = "handoff_ready"


class LoadClass(str, Enum):
    """BSS load classification by attached-node count."""

    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"


class TrafficType(str, Enum):
    """Per-flow traffic class derived from the ToS tag."""

    AUDIO = "audio"
    TEXT = "text"


class ReservationStage(int, Enum):
    ONE = 1
    TWO = 2


class ReservationState(str, Enum):
    PASSIVE = "passive"
    ACTIVE = "active"
    EXPIRED = "expired"


@dataclass(frozen=True, slots=True)
class RssiSample:
    """One RSSI reading of an AP. `weak` marks readings below the receive threshold."""

    ap: ApId
    rssi: float
    channel: int
    timestamp: int = 0
    weak: bool = False


@dataclass(frozen=True, slots=True)
class PathStep:
    """
    One visit of a mobile path: the attached AP and the region the MN is in.

    Only (ap, region) identify a step; dwell and waypoint annotate how the walk produced it.
    """

    ap: ApId
    region: RegionId
    dwell: int = field(default=1, compare=False)
    waypoint: Optional[Point] = field(default=None, compare=False)

    def token(self) -> str:
        return f"{self.ap}({self.region})"


@dataclass(frozen=True, slots=True)
class MobilePath:
    id: int
    steps: Tuple[PathStep, ...]

    @property
    def aps(self) -> Tuple[ApId, ...]:
        return tuple(step.ap for step in self.steps)

    @property
    def regions(self) -> Tuple[RegionId, ...]:
        return tuple(step.region for step in self.steps)

    @property
    def n_transitions(self) -> int:
        return len(self.steps) - 1

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True, slots=True)
class PathHistory:
    """The mining corpus. `seed` is the generation seed when known."""

    paths: Tuple[MobilePath, ...]
    seed: Optional[int] = None

    def __len__(self) -> int:
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths)


@dataclass(frozen=True, slots=True)
class MobilityRule:
    head: Tuple[ApId, ...]
    tail: ApId
    support: int
    confidence: float


class RankedPrediction(BaseModel):
    """
    Next-AP candidates in descending score order.

    `width` is how many leading candidates the predictor commits to.
    """

    candidates: Tuple[Tuple[ApId, float], ...] = Field(
        default=(),
        description="(AP id, score) pairs, best first",
    )
    decisive: bool = Field(
        default=False,
        description="Whether the predictor trusts its own answer",
    )
    width: int = Field(
        default=1,
        ge=1,
        description="Leading candidates the predictor commits to",
    )

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_unique(self) -> "RankedPrediction":
        ids = [ap for ap, _ in self.candidates]
        if len(ids) != len(set(ids)):
            raise ValueError(f"duplicate candidates in prediction: {ids}")
        return self

    @property
    def top(self) -> Optional[ApId]:
        return self.candidates[0][0] if self.candidates else None

    @property
    def ap_ids(self) -> Tuple[ApId, ...]:
        return tuple(ap for ap, _ in self.candidates)

    @property
    def is_empty(self) -> bool:
        return not self.candidates


class DelayBreakdown(BaseModel):
    """Per-handoff delay components in milliseconds."""

    scan_ms: float = 0.0
    auth_ms: float = 0.0
    reassoc_ms: float = 0.0
    load_ms: float = 0.0
    packet_ms: float = 0.0
    prediction_ms: float = 0.0

    model_config = ConfigDict(frozen=True)

    @property
    def total_ms(self) -> float:
        return self.scan_ms + self.auth_ms + self.reassoc_ms + self.load_ms + self.packet_ms + self.prediction_ms


class HandoffEvent(BaseModel):
    """
    One completed (re)association of a mobile node.

    The first event of a path is the initial association: `from_ap` is None and `predicted` equals `to_ap`.
    """

    path_id: int
    tick: int
    from_ap: Optional[ApId] = Field(..., description="Previous AP, None on initial association")
    to_ap: ApId
    predicted: Optional[ApId] = Field(..., description="Top prediction, None when the predictor had no answer")
    prediction_correct: bool
    delays: DelayBreakdown
    packets_dropped: int = Field(..., ge=0)
    reserved_bytes_used: int = Field(..., ge=0, description="Active reserved bytes that buffered overflow")
    traffic: TrafficType = TrafficType.TEXT
    load_class: LoadClass = LoadClass.LOW
    attached: int = Field(default=1, ge=1, description="Nodes on the target BSS, the MN included")
    first_association: bool = False
    emergency: bool = Field(default=False, description="No HandoffReady was raised before the move")
    failed: bool = False
    overflow_packets: int = Field(default=0, ge=0)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_prediction_flag(self) -> "HandoffEvent":
        if self.prediction_correct != (self.predicted == self.to_ap):
            raise ValueError(
                f"prediction_correct={self.prediction_correct} disagrees with "
                f"predicted={self.predicted}, to_ap={self.to_ap}"
            )
        return self

    @property
    def total_ms(self) -> float:
        return self.delays.total_ms


@dataclass(slots=True)
class Reservation:
    """A buffer reservation held by one MN on one AP."""

    ap: ApId
    mn: int
    stage: ReservationStage
    bytes: int
    state: ReservationState = ReservationState.PASSIVE
    expires_at: Optional[int] = None
    created_at: int = 0
    lent: int = 0
