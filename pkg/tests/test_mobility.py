import numpy as np
import pytest
from factories import TOP_ROW, make_path
from pydantic import ValidationError

from pmms.core.config import MobilityConfig
from pmms.core.exceptions import PathValidationException
from pmms.mobility import generator
from pmms.mobility.generator import (
    choose_next_region,
    generate_history,
    generate_path,
    nearest_ap,
    next_region_weights,
    validate_path,
)

# chi-square critical value for 7 degrees of freedom at p = 0.001
CHI2_CRITICAL_DF7 = 24.32


def test_generated_paths_are_valid(topo):
    cfg = MobilityConfig(min_aps=3, max_aps=6)
    rng = np.random.default_rng(3)
    for path_id in range(1, 301):
        path = generate_path(topo, cfg, rng, path_id)
        validate_path(path, topo)
        assert 3 <= len(path) <= 6
        assert all(a != b for a, b in zip(path.aps, path.aps[1:]))
        assert all(step.waypoint is not None and step.dwell >= 1 for step in path.steps)


class ScriptedRng:
    def __init__(self, integers):
        self._integers = iter(integers)

    def integers(self, *args):
        return next(self._integers)


def test_loiter_moves_the_step_to_the_new_region(topo, monkeypatch):
    regions = iter([1, 2])
    points = iter([(110.0, 110.0), (120.0, 50.0), (210.0, 50.0)])
    monkeypatch.setattr(generator, "choose_next_region", lambda *args: next(regions))
    monkeypatch.setattr(generator, "random_point_in_region", lambda *args: next(points))
    # two APs, start region 7, then dwells 1, 2 and 3
    rng = ScriptedRng([2, 7, 1, 2, 3])

    path = generate_path(topo, MobilityConfig(min_aps=2, max_aps=2), rng)

    # region 1 is still served by AP 0, so the first step moves there and keeps both pauses
    first, second = path.steps
    assert (first.ap, first.region, first.dwell, first.waypoint) == (0, 1, 3, (120.0, 50.0))
    assert (second.ap, second.region, second.dwell) == (1, 2, 3)
    validate_path(path, topo)


def test_path_length_range_is_covered(topo):
    cfg = MobilityConfig(min_aps=2, max_aps=4)
    rng = np.random.default_rng(4)
    lengths = {len(generate_path(topo, cfg, rng)) for _ in range(200)}
    assert lengths == {2, 3, 4}


def test_history_is_numbered_and_reproducible(topo):
    cfg = MobilityConfig()
    first = generate_history(50, topo, cfg, np.random.default_rng(9), seed=9)
    second = generate_history(50, topo, cfg, np.random.default_rng(9), seed=9)
    assert [path.id for path in first] == list(range(1, 51))
    assert first == second
    assert first.seed == 9


def test_region_weights_are_a_distribution(topo):
    cfg = MobilityConfig()
    for region in (0, 3, 14, 35):
        for heading in (None, (0, 1), (-1, -1)):
            candidates, weights = next_region_weights(region, heading, topo, cfg)
            assert candidates == sorted(candidates)
            assert weights.sum() == pytest.approx(1.0)
            assert (weights > 0).all()


def test_unbiased_walk_is_uniform(topo):
    cfg = MobilityConfig(center_bias=0.0, heading_persistence=0.0, drift_weight=0.0)
    rng = np.random.default_rng(21)
    region = 14
    candidates, weights = next_region_weights(region, (0, 1), topo, cfg)
    assert weights == pytest.approx(np.full(8, 1 / 8))

    n = 8000
    draws = [choose_next_region(region, (0, 1), topo, cfg, rng) for _ in range(n)]
    observed = np.array([draws.count(candidate) for candidate in candidates])
    expected = n / len(candidates)
    chi2 = float(((observed - expected) ** 2 / expected).sum())
    assert chi2 < CHI2_CRITICAL_DF7


def test_heading_persistence_favours_straight_moves(topo):
    cfg = MobilityConfig(center_bias=0.0, heading_persistence=1.0, drift_weight=0.0)
    # region 14 is (2, 2); moving right leads to region 15
    candidates, weights = next_region_weights(14, (0, 1), topo, cfg)
    assert candidates[int(np.argmax(weights))] == 15
    # regions behind the heading get nothing
    assert weights[candidates.index(13)] == 0.0


def test_center_bias_favours_the_middle(topo):
    cfg = MobilityConfig(center_bias=1.0, heading_persistence=0.0, drift_weight=0.0)
    candidates, weights = next_region_weights(0, None, topo, cfg)
    assert candidates[int(np.argmax(weights))] == 7


def test_drift_pulls_towards_its_direction(topo):
    cfg = MobilityConfig(center_bias=0.0, heading_persistence=0.0, drift_weight=1.0)
    # region 14 is (2, 2); the default drift (-1, -1) leads to region 7
    candidates, weights = next_region_weights(14, None, topo, cfg)
    assert candidates[int(np.argmax(weights))] == 7
    assert weights[candidates.index(15)] == 0.0
    # nothing lies up and left of the corner region, so its share spreads evenly
    candidates, weights = next_region_weights(0, None, topo, cfg)
    assert weights == pytest.approx(np.full(len(candidates), 1 / len(candidates)))


def test_default_walk_concentrates_transitions(topo):
    history = generate_history(2000, topo, MobilityConfig(min_aps=2), np.random.default_rng(8))
    successors = {}
    for path in history:
        for current, following in zip(path.aps, path.aps[1:]):
            successors.setdefault(current, []).append(following)
    # share of moves that go to the most frequent successor of their AP
    top = sum(np.bincount(following).max() for following in successors.values())
    total = sum(len(following) for following in successors.values())
    assert top / total > 0.38


def test_biases_must_fit_in_one():
    with pytest.raises(ValidationError):
        MobilityConfig(center_bias=0.7, heading_persistence=0.5)
    with pytest.raises(ValidationError):
        MobilityConfig(center_bias=0.3, heading_persistence=0.1, drift_weight=0.7)
    with pytest.raises(ValidationError):
        MobilityConfig(drift_direction=(0, 0))


def test_nearest_ap_breaks_ties_by_id(topo):
    assert nearest_ap((150.0, 150.0), {0, 1, 5, 6}, topo) == 0
    assert nearest_ap((190.0, 110.0), {0, 1, 5, 6}, topo) == 1


def test_validate_path_rejections(topo):
    validate_path(make_path(1, TOP_ROW), topo)

    with pytest.raises(PathValidationException):
        validate_path(make_path(1, [(0, 0)]), topo)
    with pytest.raises(PathValidationException, match="non-adjacent AP"):
        validate_path(make_path(1, [(0, 0), (2, 2)]), topo)
    with pytest.raises(PathValidationException, match="does not cover"):
        validate_path(make_path(1, [(0, 0), (1, 0)]), topo)
    with pytest.raises(PathValidationException, match="non-adjacent region"):
        # AP 1 covers region 8 and neighbours AP 0, but regions 0 and 8 are not adjacent
        validate_path(make_path(1, [(0, 0), (1, 8)]), topo)
