from collections import Counter

import numpy as np
import pytest

from pmms.core.exceptions import ConfigurationException
from pmms.topology.grid import (
    CHANNEL_PLAN,
    build_grid,
    candidate_next_aps,
    distance,
    random_point_in_region,
    region_bounds,
    region_center,
    region_entry_fraction,
    region_neighbors,
    region_of_point,
)


def test_region_census_of_default_grid(topo):
    assert topo.n_aps == 25
    assert topo.n_regions == 36
    assert Counter(len(aps) for aps in topo.region_aps.values()) == {1: 4, 2: 16, 4: 16}
    assert all(len(regions) == 4 for regions in topo.ap_regions.values())


def test_incidence_is_symmetric(topo):
    for region, aps in topo.region_aps.items():
        for ap in aps:
            assert region in topo.ap_regions[ap]


def test_neighbor_counts(topo):
    assert len(topo.ap_neighbors[0]) == 3
    assert len(topo.ap_neighbors[2]) == 5
    assert len(topo.ap_neighbors[12]) == 8
    assert all(ap not in neighbors for ap, neighbors in topo.ap_neighbors.items())
    assert all(a in topo.ap_neighbors[b] for a, neighbors in topo.ap_neighbors.items() for b in neighbors)


def test_geometry(topo):
    assert topo.ap_positions[0] == (100.0, 100.0)
    assert topo.ap_positions[6] == (200.0, 200.0)
    assert region_center(0, topo) == (50.0, 50.0)
    assert region_bounds(7, topo) == (100.0, 200.0, 100.0, 200.0)
    assert distance((100.0, 0.0), 0, topo) == pytest.approx(100.0)


def test_candidate_next_aps(topo):
    # region 0 is only covered by AP 0
    assert candidate_next_aps(0, 0, topo) == {0}
    # region 2 is covered by APs 1 and 2; only AP 1 neighbours AP 0
    assert candidate_next_aps(0, 2, topo) == {1}
    assert candidate_next_aps(6, 14, topo) == {6, 7, 11, 12}


def test_grid_too_small_is_rejected():
    with pytest.raises(ConfigurationException):
        build_grid(1, 5)
    with pytest.raises(ConfigurationException):
        build_grid(3, 3, ap_spacing=0)


def test_region_neighbors(topo):
    assert region_neighbors(0, topo) == {1, 6, 7}
    assert len(region_neighbors(14, topo)) == 8
    assert topo.are_adjacent_regions(14, 21)
    assert not topo.are_adjacent_regions(0, 2)


def test_region_of_point(topo):
    assert region_of_point((50.0, 50.0), topo) == 0
    assert region_of_point((150.0, 50.0), topo) == 1
    # points on or beyond the outer boundary stay in the border regions
    assert region_of_point((600.0, 600.0), topo) == 35
    assert region_of_point((-5.0, 10.0), topo) == 0


def test_region_entry_fraction(topo):
    assert region_entry_fraction((50.0, 50.0), (150.0, 50.0), 1, topo) == pytest.approx(0.5)
    assert region_entry_fraction((150.0, 50.0), (160.0, 50.0), 1, topo) == 0.0
    assert region_entry_fraction((50.0, 50.0), (150.0, 50.0), 13, topo) is None


def test_random_point_stays_in_region(topo):
    rng = np.random.default_rng(0)
    for region in range(topo.n_regions):
        point = random_point_in_region(region, topo, rng)
        x_min, x_max, y_min, y_max = region_bounds(region, topo)
        assert x_min <= point[0] <= x_max and y_min <= point[1] <= y_max


def test_channel_plan(topo):
    assert {topo.channel(ap) for ap in topo.ap_positions} == set(CHANNEL_PLAN)
    assert topo.channel(0) != topo.channel(1)
    assert topo.channel(0) != topo.channel(5)
