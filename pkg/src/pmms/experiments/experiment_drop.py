from typing import Dict, List, Optional

from loguru import logger

from ..core.config import SimConfig
from ..core.exceptions import ExperimentException
from ..handoff.drops import packets_to_bits
from ..handoff.simulator import HandoffSimulator
from ..models.domain import HandoffEvent, PathHistory
from .base_experiment import BaseExperiment, spawn_streams
from .experiment_registry import experiment_registry
from .reports import DropReport, PathDrops


@experiment_registry.register_experiment("drops")
class DropExperiment(BaseExperiment):
    """
    Runs the same test paths twice, with and without reservation, from identically seeded streams.

    The ledger never draws from a stream, so both runs see the same delays and predictions and differ
    only in the buffer a correct prediction provides.
    """

    def __init__(self, cfg: SimConfig, history: Optional[PathHistory] = None, progress: bool = False) -> None:
        super().__init__(cfg, history, progress)
        self.events_with: List[HandoffEvent] = []
        self.events_without: List[HandoffEvent] = []

    def simulate(self, reservation_enabled: bool) -> List[HandoffEvent]:
        simulator = HandoffSimulator(
            self.topo,
            self.cfg,
            spawn_streams(self.cfg),
            self.rules,
            self.tm,
            reservation_enabled=reservation_enabled,
        )
        return simulator.run(self.test_paths, progress=self.progress)

    def run(self) -> DropReport:
        self.events_with = self.simulate(reservation_enabled=True)
        self.events_without = self.simulate(reservation_enabled=False)
        if len(self.events_with) != len(self.events_without):
            raise ExperimentException(
                f"paired runs diverged: {len(self.events_with)} vs {len(self.events_without)} events"
            )

        size = self.cfg.packet_size_bytes
        rows: Dict[int, Dict[str, int]] = {}
        for with_event, without_event in zip(self.events_with, self.events_without):
            if (with_event.path_id, with_event.to_ap, with_event.tick) != (
                without_event.path_id,
                without_event.to_ap,
                without_event.tick,
            ):
                raise ExperimentException(f"paired runs diverged on path {with_event.path_id}")
            row = rows.setdefault(
                with_event.path_id,
                {"handoffs": 0, "overflow_packets": 0, "dropped_packets_with": 0, "dropped_packets_without": 0},
            )
            if not with_event.first_association:
                row["handoffs"] += 1
            row["overflow_packets"] += without_event.overflow_packets
            row["dropped_packets_with"] += with_event.packets_dropped
            row["dropped_packets_without"] += without_event.packets_dropped

        per_path = [
            PathDrops(
                path_id=path_id,
                dropped_bits_with=packets_to_bits(row["dropped_packets_with"], size),
                dropped_bits_without=packets_to_bits(row["dropped_packets_without"], size),
                **row,
            )
            for path_id, row in sorted(rows.items())
        ]
        totals = {
            key: sum(getattr(row, key) for row in per_path)
            for key in (
                "handoffs",
                "overflow_packets",
                "dropped_packets_with",
                "dropped_packets_without",
                "dropped_bits_with",
                "dropped_bits_without",
            )
        }
        logger.info(
            f"Dropped bits over {len(per_path)} paths: {totals['dropped_bits_with']} with reservation, "
            f"{totals['dropped_bits_without']} without"
        )
        return DropReport(seed=self.cfg.seed, packet_size_bytes=size, per_path=per_path, totals=totals)


def run_drop_experiment(
    cfg: SimConfig,
    history: Optional[PathHistory] = None,
    progress: bool = False,
) -> DropReport:
    """
    Paired with/without reservation runs over the same paths; dropped packets and bits per path.

    Args:
        cfg: Simulation configuration
        history: Mining corpus for the predictor
        progress: Show progress bars

    Returns:
        DropReport
    """
    return DropExperiment(cfg, history, progress).run()
