from typing import Dict, Iterable, List, Optional

import numpy as np
from loguru import logger
from tqdm import tqdm

from ..core.config import SimConfig
from ..models.domain import ApId, HandoffEvent, MobilePath
from ..prediction.predictor_registry import predictor_registry
from ..prediction.sampling import transition_context
from ..reservation.ledger import ReservationLedger, classify_traffic
from ..topology.grid import GridTopology, region_center
from .state_machine import HandoffContext, execute_handoff, initial_association


class HandoffSimulator:
    """
    Runs mobile paths through the handoff pipeline, one MN per path, on a shared clock and ledger.

    Everything random comes from the streams handed in, and the ledger never draws, so two simulators
    built from equal streams see identical delays and predictions with or without reservation.
    """

    def __init__(
        self,
        topo: GridTopology,
        cfg: SimConfig,
        streams: Dict[str, np.random.Generator],
        rules=None,
        tm=None,
        reservation_enabled: bool = True,
    ) -> None:
        """
        Args:
            topo: Grid topology
            cfg: Simulation configuration
            streams: Random streams ('ip', 'noise', 'delay', 'traffic')
            rules: Mined rules for the data-mining predictor
            tm: Transition matrix for the TM predictor
            reservation_enabled: Run the two-stage reservation
        """
        self.topo = topo
        self.cfg = cfg
        self.streams = streams
        self.rules = rules
        self.tm = tm
        self.reservation_enabled = reservation_enabled

        self.radio_cfg = cfg.radio_config()
        self.delay_cfg = cfg.delay_config()
        self.prediction_cfg = cfg.prediction_config()
        self.reservation_cfg = cfg.reservation_config()
        self.predictor = predictor_registry.get_predictor(cfg.handoff_predictor)

        self.ledger: Optional[ReservationLedger] = (
            ReservationLedger(sorted(topo.ap_positions), self.reservation_cfg) if reservation_enabled else None
        )
        self.clock = 0
        self.handoff_cache: Dict[int, List[ApId]] = {}
        self.ledger_rows: List[Dict[str, int]] = []

        tags = self.reservation_cfg.tos_map
        self._audio_tag = min((tag for tag, kind in tags.items() if kind == "audio"), default=46)
        self._text_tag = min((tag for tag, kind in tags.items() if kind == "text"), default=0)

    def run(self, paths: Iterable[MobilePath], progress: bool = False) -> List[HandoffEvent]:
        paths = list(paths)
        events: List[HandoffEvent] = []
        for path in tqdm(paths, desc="Simulating handoffs", disable=not progress):
            events.extend(self.run_path(path))
        logger.info(
            f"Simulated {len(events)} (re)associations over {len(paths)} paths "
            f"(reservation {'on' if self.reservation_enabled else 'off'})"
        )
        return events

    def run_path(self, path: MobilePath) -> List[HandoffEvent]:
        """
        Initial association at the first step, then one handoff per transition.
        """
        mn = path.id
        tag = self._audio_tag if self.streams["traffic"].random() < self.cfg.audio_share else self._text_tag
        traffic = classify_traffic(tag, self.reservation_cfg.tos_map)
        flow_bytes = self.cfg.audio_file_size if traffic.value == "audio" else self.cfg.text_file_size

        first = path.steps[0]
        first_ctx = self._context(path, None, first.ap, first, traffic, flow_bytes)
        events = [initial_association(first_ctx, self.streams["delay"])]
        pre_authenticated = self.topo.ap_neighbors[first.ap] | {first.ap}
        self._advance(first.dwell)

        for index in range(path.n_transitions):
            current, following = path.steps[index], path.steps[index + 1]
            prediction = self.predictor(
                transition_context(
                    path,
                    index,
                    self.topo,
                    self.prediction_cfg,
                    self.radio_cfg,
                    self.rules,
                    self.tm,
                    ip_rng=self.streams["ip"],
                    noise_rng=self.streams["noise"],
                )
            )
            ctx = self._context(path, current.ap, following.ap, current, traffic, flow_bytes, pre_authenticated)
            event = execute_handoff(ctx, prediction, self.ledger, self.streams["delay"])
            events.append(event)

            if self.ledger is not None:
                for ap in sorted({ap for ap in (event.predicted, event.to_ap) if ap is not None}):
                    self.ledger_rows.extend(row for row in self.ledger.snapshot(self.clock) if row["ap"] == ap)
                self.ledger.release(mn, current.ap)

            # pre-authenticate with the new AP's neighbourhood for the next hop
            pre_authenticated = self.topo.ap_neighbors[following.ap] | {following.ap}
            self._advance(following.dwell)

        if self.ledger is not None:
            self.ledger.release(mn, path.steps[-1].ap)
        return events

    def _context(
        self, path, from_ap, to_ap, step, traffic, flow_bytes, pre_authenticated=frozenset()
    ) -> HandoffContext:
        return HandoffContext(
            topo=self.topo,
            delay_cfg=self.delay_cfg,
            radio_cfg=self.radio_cfg,
            path_id=path.id,
            mn=path.id,
            from_ap=from_ap,
            to_ap=to_ap,
            position=step.waypoint or region_center(step.region, self.topo),
            now=self.clock,
            traffic=traffic,
            flow_bytes=flow_bytes,
            pre_authenticated=frozenset(pre_authenticated),
            samples_per_move=self.cfg.samples_per_move,
            noise_rng=self.streams["noise"],
            handoff_cache=self.handoff_cache,
        )

    def _advance(self, ticks: int) -> None:
        self.clock += ticks
        if self.ledger is not None:
            self.ledger.expire_and_preempt(self.clock)
