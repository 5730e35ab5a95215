import math
from typing import Dict, List, Optional, Tuple

import numpy as np
from loguru import logger
from tqdm import tqdm

from ..core.config import MobilityConfig
from ..core.exceptions import PathGenerationException, PathValidationException
from ..models.domain import ApId, MobilePath, PathHistory, PathStep, Point, RegionId
from ..topology.grid import (
    GridTopology,
    candidate_next_aps,
    distance,
    random_point_in_region,
    region_center,
    region_neighbors,
)

Heading = Tuple[int, int]


def _alignment(
    region: RegionId, direction: Optional[Heading], candidates: List[RegionId], topo: GridTopology
) -> Optional[np.ndarray]:
    """Normalised max(0, cos) between each candidate move and `direction`; None when nothing lies ahead."""
    if direction is None:
        return None
    row, col = topo.region_coords(region)
    norm = math.hypot(*direction)
    ahead = np.zeros(len(candidates))
    for k, candidate in enumerate(candidates):
        c_row, c_col = topo.region_coords(candidate)
        offset = (c_row - row, c_col - col)
        ahead[k] = max(0.0, (offset[0] * direction[0] + offset[1] * direction[1]) / (math.hypot(*offset) * norm))
    total = ahead.sum()
    return ahead / total if total > 0 else None


def next_region_weights(
    region: RegionId,
    heading: Optional[Heading],
    topo: GridTopology,
    cfg: MobilityConfig,
) -> Tuple[List[RegionId], np.ndarray]:
    """
    Probabilities of the next region of the walk.

    weight = (1 - beta - mu - nu) * uniform + beta * center + mu * heading + nu * drift, where `center`
    favours regions close to the middle of the grid, `heading` favours keeping the direction of the previous
    move and `drift` favours moving along the fixed `drift_direction` shared by every MN. A directional term
    with nothing ahead (first move, or a grid edge) hands its share to the uniform term.

    Args:
        region: Current region
        heading: (d_row, d_col) of the previous region move, if any
        topo: Grid topology
        cfg: Mobility configuration

    Returns:
        Candidate regions in ascending order and their probabilities
    """
    candidates = sorted(region_neighbors(region, topo))
    n = len(candidates)
    uniform = np.full(n, 1.0 / n)

    grid_center = (topo.width / 2, topo.height / 2)
    closeness = np.array(
        [
            math.exp(-math.dist(region_center(candidate, topo), grid_center) / (cfg.center_scale * topo.ap_spacing))
            for candidate in candidates
        ]
    )
    center = closeness / closeness.sum()

    ahead = _alignment(region, heading if cfg.heading_persistence > 0 else None, candidates, topo)
    drift = _alignment(region, cfg.drift_direction if cfg.drift_weight > 0 else None, candidates, topo)

    uniform_share = 1 - cfg.center_bias - cfg.heading_persistence - cfg.drift_weight
    weights = (
        uniform_share * uniform
        + cfg.center_bias * center
        + cfg.heading_persistence * (uniform if ahead is None else ahead)
        + cfg.drift_weight * (uniform if drift is None else drift)
    )
    return candidates, weights / weights.sum()


def choose_next_region(
    region: RegionId,
    heading: Optional[Heading],
    topo: GridTopology,
    cfg: MobilityConfig,
    rng: np.random.Generator,
) -> RegionId:
    candidates, weights = next_region_weights(region, heading, topo, cfg)
    return candidates[int(rng.choice(len(candidates), p=weights))]


def nearest_ap(position: Point, aps, topo: GridTopology) -> ApId:
    """Strongest (nearest) AP among `aps`; ties go to the lower id."""
    return min(aps, key=lambda ap: (distance(position, ap, topo), ap))


def generate_path(
    topo: GridTopology,
    cfg: MobilityConfig,
    rng: np.random.Generator,
    path_id: int = 1,
) -> MobilePath:
    """
    Generate one mobile path with the region walk.

    The MN pauses at a uniform waypoint inside every region it enters and attaches to the nearest AP of
    candidate_next_aps(current AP, region). When that is still the current AP the MN only wanders inside
    its current coverage: the pause is added to the current step, and the step moves to the new region and
    waypoint as long as it stays adjacent to the region of the step before it. Otherwise the move is dropped.

    Args:
        topo: Grid topology
        cfg: Mobility configuration (AP-count range, biases, dwell range)
        rng: Random stream
        path_id: Identifier of the path

    Returns:
        MobilePath with an AP count drawn uniformly from [min_aps, max_aps]
    """
    n_aps = int(rng.integers(cfg.min_aps, cfg.max_aps + 1))

    region = int(rng.integers(topo.n_regions))
    waypoint = random_point_in_region(region, topo, rng)
    ap = nearest_ap(waypoint, topo.region_aps[region], topo)
    steps: List[Dict] = [
        {"ap": ap, "region": region, "dwell": int(rng.integers(cfg.dwell_min, cfg.dwell_max + 1)), "waypoint": waypoint}
    ]

    heading: Optional[Heading] = None
    moves = 0
    while len(steps) < n_aps:
        moves += 1
        if moves > cfg.max_moves:
            raise PathGenerationException(f"path {path_id}: {n_aps} APs not reached within {cfg.max_moves} moves")

        next_region = choose_next_region(region, heading, topo, cfg, rng)
        waypoint = random_point_in_region(next_region, topo, rng)
        dwell = int(rng.integers(cfg.dwell_min, cfg.dwell_max + 1))

        reachable = candidate_next_aps(ap, next_region, topo)
        if not reachable:
            raise PathGenerationException(f"path {path_id}: region {next_region} unreachable from AP {ap}")

        best = nearest_ap(waypoint, reachable, topo)
        (row, col), (n_row, n_col) = topo.region_coords(region), topo.region_coords(next_region)
        if best == ap:
            steps[-1]["dwell"] += dwell
            # the loiter advances the MN unless the recorded previous step would lose region adjacency
            if len(steps) == 1 or topo.are_adjacent_regions(steps[-2]["region"], next_region):
                heading = (n_row - row, n_col - col)
                region = next_region
                steps[-1].update(region=region, waypoint=waypoint)
            continue

        heading = (n_row - row, n_col - col)
        region = next_region
        steps.append({"ap": best, "region": region, "dwell": dwell, "waypoint": waypoint})
        ap = best

    path = MobilePath(id=path_id, steps=tuple(PathStep(**step) for step in steps))
    logger.debug(f"Generated path {path_id}: {'->'.join(step.token() for step in path.steps)} in {moves} moves")
    return path


def generate_history(
    n: int,
    topo: GridTopology,
    cfg: MobilityConfig,
    rng: np.random.Generator,
    seed: Optional[int] = None,
    progress: bool = False,
) -> PathHistory:
    """
    Generate `n` independent paths, numbered 1..n.

    Args:
        n: Number of paths (>= 1)
        topo: Grid topology
        cfg: Mobility configuration
        rng: Random stream
        seed: Seed recorded on the history
        progress: Show a progress bar

    Returns:
        PathHistory
    """
    if n < 1:
        raise PathGenerationException(f"history size must be >= 1, got {n}")

    paths = tuple(
        generate_path(topo, cfg, rng, path_id)
        for path_id in tqdm(range(1, n + 1), desc="Generating paths", disable=not progress)
    )
    logger.info(f"Generated {n} paths ({sum(len(path) for path in paths)} steps)")
    return PathHistory(paths=paths, seed=seed)


def validate_path(path: MobilePath, topo: GridTopology) -> None:
    """
    Check AP/region incidence and step adjacency.

    Raises:
        PathValidationException: On the first violation
    """
    if len(path.steps) < 2:
        raise PathValidationException(f"path {path.id}: needs at least 2 steps, got {len(path.steps)}")

    for index, step in enumerate(path.steps):
        if step.region not in topo.region_aps or step.ap not in topo.ap_regions:
            raise PathValidationException(f"path {path.id}: step {index} {step.token()} outside the grid")
        if step.ap not in topo.region_aps[step.region]:
            raise PathValidationException(f"path {path.id}: AP {step.ap} does not cover region {step.region}")
        if step.dwell < 1:
            raise PathValidationException(f"path {path.id}: step {index} has dwell {step.dwell}")

    for index, (previous, step) in enumerate(zip(path.steps, path.steps[1:]), start=1):
        if not topo.are_adjacent_aps(previous.ap, step.ap):
            raise PathValidationException(
                f"path {path.id}: step {index} moves from AP {previous.ap} to non-adjacent AP {step.ap}"
            )
        if not topo.are_adjacent_regions(previous.region, step.region):
            raise PathValidationException(
                f"path {path.id}: step {index} moves from region {previous.region} to non-adjacent region {step.region}"
            )
