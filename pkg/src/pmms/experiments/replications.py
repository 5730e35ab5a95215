from concurrent.futures import ProcessPoolExecutor
from typing import List, Sequence

import pandas as pd
from loguru import logger

from ..core.config import SimConfig
from .experiment_registry import experiment_registry
from .reports import AccuracyReport, DelayReport, DropReport, Report

REPLICATION_COLUMNS = ["seed", "metric", "value"]


def run_replication(cfg: SimConfig, experiment: str) -> Report:
    """One replication owns its whole simulation state."""
    return experiment_registry.get_experiment(experiment)(cfg).run()


def run_replications(
    cfg: SimConfig,
    seeds: Sequence[int],
    workers: int = 1,
    experiment: str = "accuracy",
) -> List[Report]:
    """
    Run one experiment per seed, in worker processes when `workers` > 1.

    Args:
        cfg: Base configuration; only the master seed changes between replications
        seeds: Master seeds, one per replication
        workers: Worker processes
        experiment: Registered experiment name

    Returns:
        Reports in the order of `seeds`
    """
    configs = [cfg.with_overrides(seed=seed) for seed in seeds]
    logger.info(f"Running {len(configs)} {experiment} replications on {workers} worker(s)")
    if workers <= 1 or len(configs) <= 1:
        return [run_replication(replication_cfg, experiment) for replication_cfg in configs]

    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map preserves submission order whatever order the workers finish in
        return list(pool.map(run_replication, configs, [experiment] * len(configs)))


def summary_metrics(report: Report) -> List[tuple]:
    if isinstance(report, AccuracyReport):
        return [(f"accuracy_{name}", value) for name, value in report.overall.items()]
    if isinstance(report, DelayReport):
        return [(f"mean_{component}", value) for component, value in report.overall.items()]
    if isinstance(report, DropReport):
        return [(key, float(value)) for key, value in report.totals.items()]
    raise TypeError(f"Unsupported report type: {type(report).__name__}")


def merge_replications(reports: Sequence[Report]) -> pd.DataFrame:
    """
    Long table of summary metrics per seed, followed by the mean over seeds of every metric.
    """
    rows = [
        {"seed": report.seed, "metric": metric, "value": value}
        for report in reports
        for metric, value in summary_metrics(report)
    ]
    frame = pd.DataFrame(rows, columns=REPLICATION_COLUMNS)
    if frame.empty:
        return frame

    order = list(dict.fromkeys(frame["metric"]))
    means = frame.groupby("metric", sort=False)["value"].mean().reindex(order)
    mean_rows = pd.DataFrame({"seed": "mean", "metric": means.index, "value": means.to_numpy()})
    return pd.concat([frame, mean_rows], ignore_index=True)
