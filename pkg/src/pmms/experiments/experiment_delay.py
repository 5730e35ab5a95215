from typing import Dict, List, Optional, Sequence

import numpy as np
from loguru import logger

from ..core.config import SimConfig
from ..handoff.simulator import HandoffSimulator
from ..models.domain import HandoffEvent, LoadClass, PathHistory
from ..radio.thresholds import rssi_trace
from ..topology.grid import region_center
from .base_experiment import BaseExperiment
from .experiment_registry import experiment_registry
from .reports import DELAY_COMPONENTS, DelayReport, PathDelay


def component_means(events: Sequence[HandoffEvent]) -> Dict[str, float]:
    """Mean of every delay component (and the total) over the events."""
    if not events:
        return {}
    means = {
        component: float(np.mean([getattr(event.delays, component) for event in events]))
        for component in DELAY_COMPONENTS
        if component != "total_ms"
    }
    means["total_ms"] = float(np.mean([event.total_ms for event in events]))
    return means


def load_counts(events: Sequence[HandoffEvent]) -> Dict[str, int]:
    return {load.value: sum(event.load_class == load for event in events) for load in LoadClass}


@experiment_registry.register_experiment("delay")
class DelayExperiment(BaseExperiment):
    """
    Runs the test paths through the handoff pipeline with reservation on and averages the delay components.

    The simulated events, ledger snapshots and approach traces stay on the instance for the extra CSVs.
    """

    def __init__(self, cfg: SimConfig, history: Optional[PathHistory] = None, progress: bool = False) -> None:
        super().__init__(cfg, history, progress)
        self.events: List[HandoffEvent] = []
        self.ledger_rows: List[Dict[str, int]] = []

    def run(self) -> DelayReport:
        simulator = HandoffSimulator(self.topo, self.cfg, self.streams, self.rules, self.tm, reservation_enabled=True)
        self.events = simulator.run(self.test_paths, progress=self.progress)
        self.ledger_rows = simulator.ledger_rows

        by_path: Dict[int, List[HandoffEvent]] = {}
        for event in self.events:
            by_path.setdefault(event.path_id, []).append(event)

        per_path = [
            PathDelay(
                path_id=path_id,
                events=len(events),
                means=component_means(events),
                load_counts=load_counts(events),
            )
            for path_id, events in sorted(by_path.items())
        ]
        report = DelayReport(
            seed=self.cfg.seed,
            per_path=per_path,
            overall=component_means(self.events),
            first_association=component_means([event for event in self.events if event.first_association]),
            handoff_only=component_means([event for event in self.events if not event.first_association]),
            n_paths=len(by_path),
            n_events=len(self.events),
            n_emergency=sum(event.emergency for event in self.events),
            n_failed=sum(event.failed for event in self.events),
        )
        if report.overall:
            logger.info(
                f"Mean delays over {report.n_events} events: scan {report.overall['scan_ms']:.2f} ms, "
                f"auth {report.overall['auth_ms']:.2f} ms, reassoc {report.overall['reassoc_ms']:.2f} ms, "
                f"total {report.overall['total_ms']:.2f} ms"
            )
        return report

    def rssi_traces(self, n_paths: int = 1) -> List[Dict]:
        """
        Noise-free approach traces for every transition of the first `n_paths` test paths.
        """
        radio_cfg = self.cfg.radio_config()
        rows: List[Dict] = []
        for path in self.test_paths[:n_paths]:
            for index in range(path.n_transitions):
                current, following = path.steps[index], path.steps[index + 1]
                start = current.waypoint or region_center(current.region, self.topo)
                trace = rssi_trace(start, following.ap, current.ap, self.topo, radio_cfg, self.cfg.samples_per_move)
                rows.extend(
                    {
                        "path_id": path.id,
                        "transition": index + 1,
                        "sample": sample.index,
                        "x": sample.position[0],
                        "y": sample.position[1],
                        "current_ap": current.ap,
                        "next_ap": following.ap,
                        "current_rssi": sample.current_rssi,
                        "next_rssi": sample.next_rssi,
                        "event": sample.event.value,
                    }
                    for sample in trace
                )
        return rows


def run_delay_experiment(
    cfg: SimConfig,
    history: Optional[PathHistory] = None,
    progress: bool = False,
) -> DelayReport:
    """
    Simulate n_test paths with reservation enabled and report per-path and overall delay means.

    Args:
        cfg: Simulation configuration
        history: Mining corpus for the predictor
        progress: Show progress bars

    Returns:
        DelayReport
    """
    return DelayExperiment(cfg, history, progress).run()
