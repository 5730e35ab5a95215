from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import pandas as pd
from loguru import logger
from pydantic import BaseModel, Field

from ..core.exceptions import ReportIOException
from ..models.domain import HandoffEvent

FLOAT_FORMAT = "%.6f"
DELAY_COMPONENTS = ["scan_ms", "auth_ms", "reassoc_ms", "load_ms", "packet_ms", "prediction_ms", "total_ms"]

ACCURACY_COLUMNS = ["row_type", "path_id", "predictor", "transitions", "correct", "accuracy"]
RANK_COLUMNS = ["predictor", "rank", "count"]
DELAY_COLUMNS = ["row_type", "path_id", "events", *DELAY_COMPONENTS, "load_low", "load_medium", "load_high"]
DROP_COLUMNS = [
    "row_type",
    "path_id",
    "handoffs",
    "overflow_packets",
    "dropped_packets_with",
    "dropped_packets_without",
    "dropped_bits_with",
    "dropped_bits_without",
]
LEDGER_COLUMNS = ["tick", "ap", "free", "active_bytes", "passive_bytes"]
TRACE_COLUMNS = [
    "path_id",
    "transition",
    "sample",
    "x",
    "y",
    "current_ap",
    "next_ap",
    "current_rssi",
    "next_rssi",
    "event",
]
EVENT_COLUMNS = [
    "tick",
    "path_id",
    "from_ap",
    "to_ap",
    "predicted",
    "correct",
    *DELAY_COMPONENTS,
    "dropped",
    "reserved_bytes",
    "traffic",
    "load_class",
    "attached",
    "first_association",
    "emergency",
    "failed",
]


class PathAccuracy(BaseModel):
    path_id: int
    predictor: str
    transitions: int
    correct: int
    accuracy: Optional[float] = Field(None, description="Percent of transitions predicted correctly")


class AccuracyReport(BaseModel):
    """Prediction accuracy per path and predictor, with overall figures."""

    seed: int
    predictors: List[str]
    per_path: List[PathAccuracy] = Field(default_factory=list)
    overall: Dict[str, float] = Field(default_factory=dict, description="Per-transition accuracy in percent")
    per_path_mean: Dict[str, float] = Field(default_factory=dict, description="Mean of per-path percentages")
    rank_histograms: Dict[str, Dict[str, int]] = Field(default_factory=dict)
    ip_expected: Optional[float] = Field(None, description="Analytic IP accuracy in percent")
    n_paths: int = 0
    n_transitions: int = 0


class PathDelay(BaseModel):
    path_id: int
    events: int
    means: Dict[str, float]
    load_counts: Dict[str, int]


class DelayReport(BaseModel):
    """Delay components per path and over all (re)associations."""

    seed: int
    per_path: List[PathDelay] = Field(default_factory=list)
    overall: Dict[str, float] = Field(default_factory=dict, description="Mean per event, pooled over paths")
    first_association: Dict[str, float] = Field(default_factory=dict)
    handoff_only: Dict[str, float] = Field(default_factory=dict)
    n_paths: int = 0
    n_events: int = 0
    n_emergency: int = 0
    n_failed: int = 0


class PathDrops(BaseModel):
    path_id: int
    handoffs: int
    overflow_packets: int
    dropped_packets_with: int
    dropped_packets_without: int
    dropped_bits_with: int
    dropped_bits_without: int


class DropReport(BaseModel):
    """Dropped traffic per path, with and without reservation, on identical runs."""

    seed: int
    packet_size_bytes: int
    per_path: List[PathDrops] = Field(default_factory=list)
    totals: Dict[str, int] = Field(default_factory=dict)


Report = Union[AccuracyReport, DelayReport, DropReport]


def report_frame(report: Report) -> pd.DataFrame:
    """
    Flatten a report into its CSV table: one row per path (and predictor), then summary rows.
    """
    if isinstance(report, AccuracyReport):
        rows = [
            {"row_type": "path", **row.model_dump()}
            for row in sorted(report.per_path, key=lambda row: (row.path_id, report.predictors.index(row.predictor)))
        ]
        for predictor in report.predictors:
            if predictor in report.overall:
                rows.append(
                    {
                        "row_type": "summary",
                        "path_id": None,
                        "predictor": predictor,
                        "transitions": report.n_transitions,
                        "correct": sum(row.correct for row in report.per_path if row.predictor == predictor),
                        "accuracy": report.overall[predictor],
                    }
                )
            if predictor in report.per_path_mean:
                rows.append(
                    {
                        "row_type": "summary_path_mean",
                        "path_id": None,
                        "predictor": predictor,
                        "transitions": report.n_transitions,
                        "correct": None,
                        "accuracy": report.per_path_mean[predictor],
                    }
                )
        if report.ip_expected is not None and report.per_path:
            rows.append({"row_type": "ip_expected", "predictor": "ip", "accuracy": report.ip_expected})
        return _nullable_ints(pd.DataFrame(rows, columns=ACCURACY_COLUMNS), ["path_id", "transitions", "correct"])

    if isinstance(report, DelayReport):
        rows = [_delay_row("path", row.path_id, row.events, row.means, row.load_counts) for row in report.per_path]
        if report.per_path:
            load_totals = {
                kind: sum(row.load_counts.get(kind, 0) for row in report.per_path) for kind in ("low", "medium", "high")
            }
            rows.append(_delay_row("summary", None, report.n_events, report.overall, load_totals))
            if report.handoff_only:
                rows.append(_delay_row("summary_handoff", None, None, report.handoff_only, {}))
            if report.first_association:
                rows.append(_delay_row("summary_first_association", None, None, report.first_association, {}))
        return _nullable_ints(
            pd.DataFrame(rows, columns=DELAY_COLUMNS), ["path_id", "events", "load_low", "load_medium", "load_high"]
        )

    if isinstance(report, DropReport):
        rows = [{"row_type": "path", **row.model_dump()} for row in report.per_path]
        if report.per_path:
            rows.append({"row_type": "summary", "path_id": None, **report.totals})
        return _nullable_ints(pd.DataFrame(rows, columns=DROP_COLUMNS), DROP_COLUMNS[1:])

    raise TypeError(f"Unsupported report type: {type(report).__name__}")


def _nullable_ints(frame: pd.DataFrame, columns: List[str]) -> pd.DataFrame:
    # summary rows leave id and count cells empty; Int64 keeps the rest integral in the CSV
    return frame.astype({column: "Int64" for column in columns})


def _delay_row(row_type, path_id, events, means, load_counts) -> Dict:
    row = {"row_type": row_type, "path_id": path_id, "events": events}
    row.update({component: means.get(component) for component in DELAY_COMPONENTS})
    row.update({f"load_{kind}": load_counts.get(kind) for kind in ("low", "medium", "high")})
    return row


def write_frame(frame: pd.DataFrame, sink: Union[str, Path]) -> None:
    """Deterministic CSV: fixed columns, '\\n' line endings, fixed float format."""
    try:
        if isinstance(sink, (str, Path)):
            Path(sink).parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(sink, index=False, lineterminator="\n", float_format=FLOAT_FORMAT)
    except OSError as e:
        raise ReportIOException(str(e), str(sink)) from e
    logger.debug(f"Wrote {len(frame)} rows to {sink}")


def emit_report(report: Report, sink: Union[str, Path], format: str = "csv") -> None:
    """
    Write a report as CSV.

    Args:
        report: Accuracy, delay or drop report
        sink: Destination file
        format: Only 'csv' is supported
    """
    if format != "csv":
        raise ValueError(f"Unsupported report format {format!r}")
    write_frame(report_frame(report), sink)


def rank_frame(report: AccuracyReport) -> pd.DataFrame:
    rows = [
        {"predictor": predictor, "rank": rank, "count": count}
        for predictor in report.predictors
        for rank, count in report.rank_histograms.get(predictor, {}).items()
    ]
    return pd.DataFrame(rows, columns=RANK_COLUMNS)


def events_frame(events: Sequence[HandoffEvent]) -> pd.DataFrame:
    rows = [
        {
            "tick": event.tick,
            "path_id": event.path_id,
            "from_ap": event.from_ap,
            "to_ap": event.to_ap,
            "predicted": event.predicted,
            "correct": event.prediction_correct,
            "scan_ms": event.delays.scan_ms,
            "auth_ms": event.delays.auth_ms,
            "reassoc_ms": event.delays.reassoc_ms,
            "load_ms": event.delays.load_ms,
            "packet_ms": event.delays.packet_ms,
            "prediction_ms": event.delays.prediction_ms,
            "total_ms": event.total_ms,
            "dropped": event.packets_dropped,
            "reserved_bytes": event.reserved_bytes_used,
            "traffic": event.traffic.value,
            "load_class": event.load_class.value,
            "attached": event.attached,
            "first_association": event.first_association,
            "emergency": event.emergency,
            "failed": event.failed,
        }
        for event in events
    ]
    # nullable ints keep AP columns integral despite the empty from_ap of first associations
    frame = pd.DataFrame(rows, columns=EVENT_COLUMNS)
    return frame.astype({"from_ap": "Int64", "predicted": "Int64"})


def read_summary(source: Union[str, Path], value_column: str = "accuracy", key_column: str = "predictor") -> Dict:
    """
    Parse the summary rows of an emitted report back into {key: value}.
    """
    try:
        frame = pd.read_csv(source)
    except OSError as e:
        raise ReportIOException(str(e), str(source)) from e
    summary = frame[frame["row_type"] == "summary"]
    return {row[key_column]: float(row[value_column]) for _, row in summary.iterrows()}
