import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, Optional, Tuple

import numpy as np
from loguru import logger

from ..core.exceptions import ConfigurationException
from ..models.domain import ApId, Point, RegionId

# 802.11b/g non-overlapping channels
CHANNEL_PLAN = (1, 6, 11)


@dataclass(frozen=True)
class GridTopology:
    """
    AP grid of `ap_rows` x `ap_cols` access points placed on the interior corners of a
    (ap_rows + 1) x (ap_cols + 1) grid of square regions.

    Region (i, j) spans x in [j*s, (j+1)*s] and y in [i*s, (i+1)*s]; AP (r, c) sits at ((c+1)*s, (r+1)*s),
    the shared corner of regions (r, c), (r, c+1), (r+1, c) and (r+1, c+1). Immutable once built.
    """

    ap_rows: int
    ap_cols: int
    ap_spacing: float
    ap_positions: Dict[ApId, Point]
    region_aps: Dict[RegionId, FrozenSet[ApId]]
    ap_regions: Dict[ApId, FrozenSet[RegionId]]
    ap_neighbors: Dict[ApId, FrozenSet[ApId]]

    @property
    def region_rows(self) -> int:
        return self.ap_rows + 1

    @property
    def region_cols(self) -> int:
        return self.ap_cols + 1

    @property
    def n_aps(self) -> int:
        return self.ap_rows * self.ap_cols

    @property
    def n_regions(self) -> int:
        return self.region_rows * self.region_cols

    @property
    def width(self) -> float:
        return self.region_cols * self.ap_spacing

    @property
    def height(self) -> float:
        return self.region_rows * self.ap_spacing

    def ap_coords(self, ap: ApId) -> Tuple[int, int]:
        return divmod(ap, self.ap_cols)

    def region_coords(self, region: RegionId) -> Tuple[int, int]:
        return divmod(region, self.region_cols)

    def home_region(self, ap: ApId) -> RegionId:
        """Canonical region of AP (r, c): region (r, c)."""
        row, col = self.ap_coords(ap)
        return row * self.region_cols + col

    def channel(self, ap: ApId) -> int:
        row, col = self.ap_coords(ap)
        return CHANNEL_PLAN[(row + col) % len(CHANNEL_PLAN)]

    def are_adjacent_aps(self, a: ApId, b: ApId) -> bool:
        return b in self.ap_neighbors[a]

    def are_adjacent_regions(self, a: RegionId, b: RegionId) -> bool:
        return b in region_neighbors(a, self)


def build_grid(ap_rows: int = 5, ap_cols: int = 5, ap_spacing: float = 100.0) -> GridTopology:
    """
    Build the AP grid and its region incidence.

    Args:
        ap_rows: Number of AP rows (>= 2)
        ap_cols: Number of AP columns (>= 2)
        ap_spacing: Distance between adjacent APs in meters

    Returns:
        GridTopology
    """
    if ap_rows < 2 or ap_cols < 2:
        raise ConfigurationException(f"AP grid must be at least 2x2, got {ap_rows}x{ap_cols}")
    if ap_spacing <= 0:
        raise ConfigurationException(f"ap_spacing must be positive, got {ap_spacing}")

    region_cols = ap_cols + 1
    ap_positions: Dict[ApId, Point] = {}
    region_sets: Dict[RegionId, set] = {region: set() for region in range((ap_rows + 1) * region_cols)}
    ap_region_sets: Dict[ApId, set] = {}
    neighbors: Dict[ApId, FrozenSet[ApId]] = {}

    for row in range(ap_rows):
        for col in range(ap_cols):
            ap = row * ap_cols + col
            ap_positions[ap] = ((col + 1) * ap_spacing, (row + 1) * ap_spacing)

            # the four regions sharing this AP's corner
            corners = {(row + dr) * region_cols + (col + dc) for dr in (0, 1) for dc in (0, 1)}
            ap_region_sets[ap] = corners
            for region in corners:
                region_sets[region].add(ap)

            neighbors[ap] = frozenset(
                (row + dr) * ap_cols + (col + dc)
                for dr in (-1, 0, 1)
                for dc in (-1, 0, 1)
                if (dr or dc) and 0 <= row + dr < ap_rows and 0 <= col + dc < ap_cols
            )

    topo = GridTopology(
        ap_rows=ap_rows,
        ap_cols=ap_cols,
        ap_spacing=float(ap_spacing),
        ap_positions=ap_positions,
        region_aps={region: frozenset(aps) for region, aps in region_sets.items()},
        ap_regions={ap: frozenset(regions) for ap, regions in ap_region_sets.items()},
        ap_neighbors=neighbors,
    )
    logger.debug(f"Built {ap_rows}x{ap_cols} AP grid with {topo.n_regions} regions, spacing {ap_spacing} m")
    return topo


def candidate_next_aps(current: ApId, next_region: RegionId, topo: GridTopology) -> FrozenSet[ApId]:
    """
    Intersect the current AP and its neighbors with the APs covering the next region.

    A result of {current} means the move needs no handoff; an empty result means the region
    lies outside the current AP's reach.
    """
    reachable = topo.ap_neighbors[current] | {current}
    return frozenset(reachable & topo.region_aps[next_region])


def distance(mn_pos: Point, ap: ApId, topo: GridTopology) -> float:
    x, y = topo.ap_positions[ap]
    return math.hypot(mn_pos[0] - x, mn_pos[1] - y)


def region_center(region: RegionId, topo: GridTopology) -> Point:
    row, col = topo.region_coords(region)
    return ((col + 0.5) * topo.ap_spacing, (row + 0.5) * topo.ap_spacing)


def region_neighbors(region: RegionId, topo: GridTopology) -> FrozenSet[RegionId]:
    """8-neighbourhood of a region in the region grid."""
    row, col = topo.region_coords(region)
    return frozenset(
        (row + dr) * topo.region_cols + (col + dc)
        for dr in (-1, 0, 1)
        for dc in (-1, 0, 1)
        if (dr or dc) and 0 <= row + dr < topo.region_rows and 0 <= col + dc < topo.region_cols
    )


def region_of_point(pos: Point, topo: GridTopology) -> RegionId:
    col = min(max(int(pos[0] // topo.ap_spacing), 0), topo.region_cols - 1)
    row = min(max(int(pos[1] // topo.ap_spacing), 0), topo.region_rows - 1)
    return row * topo.region_cols + col


def region_bounds(region: RegionId, topo: GridTopology) -> Tuple[float, float, float, float]:
    """(x_min, x_max, y_min, y_max) of a region."""
    row, col = topo.region_coords(region)
    s = topo.ap_spacing
    return (col * s, (col + 1) * s, row * s, (row + 1) * s)


def region_entry_fraction(start: Point, end: Point, region: RegionId, topo: GridTopology) -> Optional[float]:
    """
    Fraction along start -> end at which the segment first lies inside `region`.

    Slab clipping against the region square. Returns None when the segment misses the region.
    """
    x_min, x_max, y_min, y_max = region_bounds(region, topo)
    t_enter, t_exit = 0.0, 1.0
    for origin, delta, low, high in (
        (start[0], end[0] - start[0], x_min, x_max),
        (start[1], end[1] - start[1], y_min, y_max),
    ):
        if delta == 0:
            if origin < low or origin > high:
                return None
            continue
        t_low = (low - origin) / delta
        t_high = (high - origin) / delta
        if t_low > t_high:
            t_low, t_high = t_high, t_low
        t_enter = max(t_enter, t_low)
        t_exit = min(t_exit, t_high)
        if t_enter > t_exit:
            return None
    return t_enter


def random_point_in_region(region: RegionId, topo: GridTopology, rng: np.random.Generator) -> Point:
    x_min, x_max, y_min, y_max = region_bounds(region, topo)
    return (float(rng.uniform(x_min, x_max)), float(rng.uniform(y_min, y_max)))


def interpolate(start: Point, end: Point, fraction: float) -> Point:
    return (start[0] + fraction * (end[0] - start[0]), start[1] + fraction * (end[1] - start[1]))
