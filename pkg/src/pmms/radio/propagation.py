import math
from typing import List, Optional

import numpy as np

from ..core.config import RadioConfig
from ..core.exceptions import DomainException
from ..models.domain import Point, RegionId, RssiSample
from ..topology.grid import GridTopology, distance

SPEED_OF_LIGHT = 299_792_458.0


def friis_rssi(cfg: RadioConfig, d: float) -> float:
    """
    Free-space received power in watts: Pt * Gt * Gr * lambda^2 / ((4 pi)^2 * d^2 * L).

    Distances below `cfg.min_distance` are clamped to it (near field).

    Args:
        cfg: Radio configuration
        d: Transmitter-receiver distance in meters

    Returns:
        Received power in watts
    """
    if d <= 0:
        raise DomainException(f"Friis model needs a positive distance, got {d}")
    d = max(d, cfg.min_distance)
    wavelength = SPEED_OF_LIGHT / cfg.frequency
    return cfg.trans_power * cfg.gain_t * cfg.gain_r * wavelength**2 / ((4 * math.pi) ** 2 * d**2 * cfg.loss)


def reported_rssi(cfg: RadioConfig, d: float) -> float:
    """
    RSSI on the scale the threshold bands are expressed in.

    Friis-shaped, anchored so that an MN at `rssi_reference_distance` or closer reads `rssi_max`.
    """
    d = max(d, cfg.min_distance)
    return cfg.rssi_max * min(1.0, friis_rssi(cfg, d) / friis_rssi(cfg, cfg.rssi_reference_distance))


def apply_noise(value: float, cfg: RadioConfig, rng: Optional[np.random.Generator]) -> float:
    """Multiplicative Gaussian noise on a power reading, clipped at zero."""
    if rng is None or cfg.noise_stddev_fraction == 0:
        return value
    return max(0.0, value * (1.0 + float(rng.normal(0.0, cfg.noise_stddev_fraction))))


def sample_rssi(
    mn_pos: Point,
    topo: GridTopology,
    current_region: RegionId,
    cfg: RadioConfig,
    rng: Optional[np.random.Generator] = None,
    timestamp: int = 0,
) -> List[RssiSample]:
    """
    One sampling event: a reading from every AP covering the MN's region (at most four).

    Args:
        mn_pos: MN position in meters
        topo: Grid topology
        current_region: Region the MN is in
        cfg: Radio configuration
        rng: Noise source; readings are exact without one
        timestamp: Tick of the sampling event

    Returns:
        Samples in ascending AP order
    """
    samples = []
    for ap in sorted(topo.region_aps[current_region]):
        d = max(distance(mn_pos, ap, topo), cfg.min_distance)
        rssi = apply_noise(friis_rssi(cfg, d), cfg, rng)
        samples.append(
            RssiSample(
                ap=ap,
                rssi=rssi,
                channel=topo.channel(ap),
                timestamp=timestamp,
                weak=rssi < cfg.receive_threshold,
            )
        )
    return samples
