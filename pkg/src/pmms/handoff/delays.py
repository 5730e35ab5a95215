from typing import Optional

import numpy as np

from ..core.config import DelayConfig
from ..core.exceptions import UnstableQueueException
from ..models.domain import LoadClass


def classify_load(attached: int, cfg: Optional[DelayConfig] = None) -> LoadClass:
    """Low up to load_low_max attached nodes, High from load_high_min, Medium in between."""
    cfg = cfg or DelayConfig()
    if attached <= cfg.load_low_max:
        return LoadClass.LOW
    if attached >= cfg.load_high_min:
        return LoadClass.HIGH
    return LoadClass.MEDIUM


def load_surcharge(load: LoadClass, cfg: DelayConfig) -> float:
    """Extra milliseconds per delay component caused by collisions and retransmissions."""
    return cfg.load_surcharges[load.value]


def scan_delay(
    first_association: bool,
    n_channels: int,
    cfg: DelayConfig,
    load: LoadClass,
    rng: np.random.Generator,
) -> float:
    """
    Probe delay in ms.

    A first association probes every channel for a uniform time in [minChannelTime, maxChannelTime];
    later handoffs only ping the AP found during background scanning.
    """
    if n_channels < 1:
        raise ValueError(f"n_channels must be >= 1, got {n_channels}")
    if first_association:
        return float(rng.uniform(cfg.min_channel_time, cfg.max_channel_time, size=n_channels).sum())
    return cfg.ping_time + load_surcharge(load, cfg)


def auth_delay(
    first_association: bool,
    load: LoadClass,
    cfg: DelayConfig,
    rng: Optional[np.random.Generator] = None,
) -> float:
    """
    Authentication delay in ms: the four-frame shared-key exchange on first association, a liveness
    check once the MN is pre-authenticated.
    """
    if first_association:
        return 4 * cfg.oneway_time + load_surcharge(load, cfg)
    return cfg.ping_time + load_surcharge(load, cfg)


def reassoc_delay(
    load: LoadClass,
    iapp_enabled: bool,
    cfg: DelayConfig,
    rng: Optional[np.random.Generator] = None,
) -> float:
    """Reassociation delay in ms: request/response, plus four context-transfer frames with IAPP."""
    frames = 6 if iapp_enabled else 2
    return frames * cfg.oneway_time + load_surcharge(load, cfg)


def packet_delay(a: float, b: float, mode: str = "standard") -> float:
    """
    Mean packet delay in seconds of a queue served at `a` packets/s with arrivals at `b` packets/s.

    `standard` is 1/(a - b). `verbatim` evaluates 1/a + 1/(1 - b/a) term by term.

    Raises:
        UnstableQueueException: b >= a
    """
    if b < 0 or a <= 0:
        raise ValueError(f"rates must satisfy a > 0 and b >= 0, got a={a}, b={b}")
    if b >= a:
        raise UnstableQueueException(f"arrival rate {b} must stay below service rate {a}")
    if mode == "verbatim":
        return 1.0 / a + 1.0 / (1.0 - b / a)
    if mode != "standard":
        raise ValueError(f"unknown packet delay mode {mode!r}")
    return 1.0 / (a - b)


def packet_delay_ms(load: LoadClass, cfg: DelayConfig) -> float:
    return packet_delay(cfg.proc_cap, cfg.arrival_rates[load.value], cfg.packet_delay_mode) * 1000.0


def prediction_penalty(
    prediction_correct: bool,
    cfg: DelayConfig,
    load: LoadClass,
    rng: np.random.Generator,
    pre_authenticated: bool = True,
) -> float:
    """
    Cost in ms of an unplanned target: a probe of the actual AP's channel, plus the full shared-key
    exchange when that AP was not pre-authenticated. Zero for a correct prediction.
    """
    if prediction_correct:
        return 0.0
    penalty = scan_delay(True, 1, cfg, load, rng)
    if not pre_authenticated:
        penalty += auth_delay(True, load, cfg, rng)
    return penalty
