from .grid import (
    GridTopology,
    build_grid,
    candidate_next_aps,
    distance,
    interpolate,
    random_point_in_region,
    region_bounds,
    region_center,
    region_entry_fraction,
    region_neighbors,
    region_of_point,
)

__all__ = [
    "GridTopology",
    "build_grid",
    "candidate_next_aps",
    "distance",
    "interpolate",
    "random_point_in_region",
    "region_bounds",
    "region_center",
    "region_entry_fraction",
    "region_neighbors",
    "region_of_point",
]
