from .base_experiment import STREAM_NAMES, BaseExperiment, spawn_streams
from .experiment_accuracy import AccuracyExperiment, run_accuracy_experiment
from .experiment_delay import DelayExperiment, run_delay_experiment
from .experiment_drop import DropExperiment, run_drop_experiment
from .experiment_registry import experiment_registry
from .replications import merge_replications, run_replications
from .reports import (
    AccuracyReport,
    DelayReport,
    DropReport,
    PathAccuracy,
    PathDelay,
    PathDrops,
    emit_report,
    events_frame,
    rank_frame,
    read_summary,
    report_frame,
    write_frame,
)

__all__ = [
    "STREAM_NAMES",
    "AccuracyExperiment",
    "AccuracyReport",
    "BaseExperiment",
    "DelayExperiment",
    "DelayReport",
    "DropExperiment",
    "DropReport",
    "PathAccuracy",
    "PathDelay",
    "PathDrops",
    "emit_report",
    "events_frame",
    "experiment_registry",
    "merge_replications",
    "rank_frame",
    "read_summary",
    "report_frame",
    "run_accuracy_experiment",
    "run_delay_experiment",
    "run_drop_experiment",
    "run_replications",
    "spawn_streams",
    "write_frame",
]
