import itertools
from decimal import Decimal, getcontext

import numpy as np
import pytest
from factories import RadioConfigFactory

from pmms.core.exceptions import DomainException
from pmms.models.domain import ThresholdEvent
from pmms.radio.propagation import SPEED_OF_LIGHT, apply_noise, friis_rssi, reported_rssi, sample_rssi
from pmms.radio.thresholds import classify_threshold, first_event_index, rssi_trace
from pmms.topology.grid import region_center

PI = Decimal("3.14159265358979323846264338327950288419716939937510582097494459")


def friis_oracle(pt: float, f: float, d: float, loss: float) -> Decimal:
    getcontext().prec = 60
    wavelength = Decimal(SPEED_OF_LIGHT) / Decimal(f)
    return Decimal(pt) * wavelength**2 / ((4 * PI) ** 2 * Decimal(d) ** 2 * Decimal(loss))


def test_friis_matches_high_precision_evaluation():
    powers = [0.001, 0.01, 0.05, 0.1, 1.0]
    frequencies = [914e6, 2.412e9, 2.437e9, 5.18e9, 900e6]
    distances = [0.5, 1.0, 7.3, 10.0, 50.0, 100.0, 141.42, 500.0]
    losses = [1.0, 1.5, 2.0, 3.7, 10.0]

    worst = Decimal(0)
    for pt, f, d, loss in itertools.product(powers, frequencies, distances, losses):
        cfg = RadioConfigFactory(trans_power=pt, frequency=f, loss=loss)
        expected = friis_oracle(pt, f, d, loss)
        worst = max(worst, abs(Decimal(friis_rssi(cfg, d)) - expected) / expected)
    assert worst <= Decimal("1e-12")


@pytest.mark.parametrize("d", [0.0, -1.0])
def test_friis_rejects_non_positive_distance(d):
    with pytest.raises(DomainException):
        friis_rssi(RadioConfigFactory(), d)


def test_friis_decreases_with_distance():
    cfg = RadioConfigFactory()
    readings = [friis_rssi(cfg, d) for d in (1.0, 10.0, 50.0, 100.0, 200.0)]
    assert readings == sorted(readings, reverse=True)
    # inverse square law
    assert friis_rssi(cfg, 10.0) / friis_rssi(cfg, 20.0) == pytest.approx(4.0)


def test_reported_rssi_scale():
    cfg = RadioConfigFactory()
    assert reported_rssi(cfg, 5.0) == pytest.approx(cfg.rssi_max)
    assert reported_rssi(cfg, 10.0) == pytest.approx(cfg.rssi_max)
    assert reported_rssi(cfg, 100.0) == pytest.approx(1e-3)


@pytest.mark.parametrize(
    "current, best_next, expected",
    [
        (1.5e-3, 70e-3, ThresholdEvent.HANDOFF_READY),
        (2e-3, 65e-3, ThresholdEvent.HANDOFF_READY),
        (1.5e-3, 10e-3, ThresholdEvent.WARNING),
        (3.5e-3, 80e-3, ThresholdEvent.WARNING),
        (10e-3, 80e-3, ThresholdEvent.NONE),
    ],
)
def test_classify_threshold(current, best_next, expected):
    assert classify_threshold(current, best_next, RadioConfigFactory()) == expected


def test_sample_rssi_reads_every_covering_ap(topo):
    cfg = RadioConfigFactory()
    samples = sample_rssi(region_center(7, topo), topo, 7, cfg, timestamp=3)
    assert [sample.ap for sample in samples] == [0, 1, 5, 6]
    # the region centre is equidistant from its four corner APs
    assert len({round(sample.rssi, 20) for sample in samples}) == 1
    assert all(sample.timestamp == 3 for sample in samples)
    assert [sample.channel for sample in samples] == [topo.channel(ap) for ap in (0, 1, 5, 6)]


def test_sample_rssi_flags_weak_readings(topo):
    cfg = RadioConfigFactory(receive_threshold=1.0)
    assert all(sample.weak for sample in sample_rssi((150.0, 150.0), topo, 7, cfg))


def test_noise_is_optional_and_non_negative():
    quiet = RadioConfigFactory()
    assert apply_noise(1e-3, quiet, np.random.default_rng(0)) == 1e-3

    noisy = RadioConfigFactory(noise_stddev_fraction=2.0)
    rng = np.random.default_rng(0)
    values = [apply_noise(1e-3, noisy, rng) for _ in range(200)]
    assert min(values) >= 0.0
    assert len(set(values)) > 1
    assert apply_noise(1e-3, noisy, None) == 1e-3


def test_trace_towards_adjacent_ap_reaches_handoff_ready(topo):
    cfg = RadioConfigFactory()
    trace = rssi_trace(topo.ap_positions[0], 1, 0, topo, cfg, n_samples=10)
    assert len(trace) == 10
    assert trace[0].event == ThresholdEvent.NONE
    assert trace[-1].event == ThresholdEvent.HANDOFF_READY

    next_readings = [sample.next_rssi for sample in trace]
    assert next_readings == sorted(next_readings)

    warning = first_event_index(trace, ThresholdEvent.WARNING)
    ready = first_event_index(trace, ThresholdEvent.HANDOFF_READY)
    assert warning is not None and ready is not None
    assert warning <= ready


def test_first_event_index_none_when_never_reached(topo):
    cfg = RadioConfigFactory()
    trace = rssi_trace(topo.ap_positions[0], 1, 0, topo, cfg, n_samples=1)
    # one sample half way: neither AP is close enough for HandoffReady
    assert first_event_index(trace, ThresholdEvent.HANDOFF_READY) is None
