import numpy as np
import pytest
from factories import ReservationConfigFactory

from pmms.core.exceptions import (
    DuplicateReservationException,
    LedgerInvariantException,
    ProtocolOrderException,
    ReservationDeniedException,
)
from pmms.models.domain import ReservationStage, ReservationState, TrafficType
from pmms.reservation import (
    ReservationLedger,
    classify_traffic,
    confirm,
    expire_and_preempt,
    first_stage_reserve,
    second_stage_reserve,
)

MN = 1
OTHER_MN = 2


@pytest.fixture
def ledger() -> ReservationLedger:
    return ReservationLedger(range(4), ReservationConfigFactory())


def test_stage_amounts(ledger):
    stage_one = first_stage_reserve(ledger, 0, MN, now=0)
    assert stage_one.bytes == 5_000_000
    assert stage_one.stage == ReservationStage.ONE
    assert stage_one.state == ReservationState.PASSIVE
    assert stage_one.expires_at == 2

    audio = second_stage_reserve(ledger, 0, MN, TrafficType.AUDIO, now=1)
    assert audio.bytes == 4_750_000
    assert audio.expires_at == stage_one.expires_at

    first_stage_reserve(ledger, 1, MN, now=0)
    text = second_stage_reserve(ledger, 1, MN, TrafficType.TEXT, now=0)
    assert text.bytes == 1_900_000

    assert ledger.buffer(0).free == 100_000_000 - 5_000_000 - 4_750_000
    assert ledger.buffer(0).passive_bytes == 9_750_000
    assert ledger.reserved_bytes(MN, 0) == 9_750_000
    ledger.audit()


def test_duplicate_first_stage_is_rejected(ledger):
    ledger.first_stage_reserve(0, MN, now=0)
    with pytest.raises(DuplicateReservationException):
        ledger.first_stage_reserve(0, MN, now=1)
    # another MN on the same AP is fine
    ledger.first_stage_reserve(0, OTHER_MN, now=1)
    ledger.audit()


def test_second_stage_needs_a_live_first_stage(ledger):
    with pytest.raises(ProtocolOrderException):
        ledger.second_stage_reserve(0, MN, TrafficType.AUDIO, now=0)

    ledger.first_stage_reserve(0, MN, now=0)
    with pytest.raises(ProtocolOrderException):
        # timer ran out at tick 2
        ledger.second_stage_reserve(0, MN, TrafficType.AUDIO, now=2)

    ledger.second_stage_reserve(0, MN, TrafficType.AUDIO, now=1)
    with pytest.raises(DuplicateReservationException):
        ledger.second_stage_reserve(0, MN, TrafficType.TEXT, now=1)


def test_reservation_denied_on_an_empty_buffer():
    ledger = ReservationLedger([0], ReservationConfigFactory(buffer_size=10))
    with pytest.raises(ReservationDeniedException):
        ledger.first_stage_reserve(0, MN, now=0)


def test_confirm_true_activates_both_stages(ledger):
    ledger.first_stage_reserve(0, MN, now=0)
    ledger.second_stage_reserve(0, MN, TrafficType.AUDIO, now=0)
    confirm(ledger, MN, 0, True, now=1)

    buf = ledger.buffer(0)
    assert buf.passive_bytes == 0
    assert buf.active_bytes == 9_750_000
    assert ledger.reserved_bytes(MN, 0, ReservationState.ACTIVE) == 9_750_000
    # active reservations never expire
    assert expire_and_preempt(ledger, now=100) == 0
    ledger.audit()


def test_confirm_false_releases(ledger):
    ledger.first_stage_reserve(0, MN, now=0)
    ledger.second_stage_reserve(0, MN, TrafficType.TEXT, now=0)
    confirm(ledger, MN, 0, False, now=1)
    assert ledger.buffer(0).free == 100_000_000
    assert ledger.reserved_bytes(MN, 0) == 0
    ledger.audit()


def test_confirm_without_reservation_is_a_no_op(ledger):
    ledger.confirm(MN, 3, True, now=0)
    assert ledger.buffer(3).free == 100_000_000


def test_expiry_reclaims_passive_reservations(ledger):
    ledger.first_stage_reserve(0, MN, now=0)
    ledger.second_stage_reserve(0, MN, TrafficType.AUDIO, now=0)
    ledger.first_stage_reserve(1, MN, now=1)

    assert ledger.expire_and_preempt(now=1) == 0
    assert ledger.expire_and_preempt(now=2) == 2
    assert ledger.buffer(0).free == 100_000_000
    assert ledger.expire_and_preempt(now=3) == 1
    assert all(buf.free == buf.total for buf in ledger.buffers.values())
    ledger.audit()


def test_borrowing_does_not_change_the_confirmed_outcome():
    with_loan = ReservationLedger(range(2), ReservationConfigFactory())
    without_loan = ReservationLedger(range(2), ReservationConfigFactory())
    for ledger in (with_loan, without_loan):
        ledger.first_stage_reserve(0, MN, now=0)
        ledger.second_stage_reserve(0, MN, TrafficType.AUDIO, now=0)

    assert with_loan.borrow(0, OTHER_MN, 6_000_000) == 6_000_000
    assert len(with_loan.buffer(0).loans) == 2
    # the owner cannot borrow its own bytes
    assert with_loan.borrow(0, MN, 1_000) == 0
    with_loan.audit()

    for ledger in (with_loan, without_loan):
        ledger.confirm(MN, 0, True, now=1)
    assert with_loan.snapshot(1) == without_loan.snapshot(1)
    assert with_loan.buffer(0).loans == []


def test_borrow_is_capped_by_passive_bytes(ledger):
    ledger.first_stage_reserve(0, MN, now=0)
    assert ledger.borrow(0, OTHER_MN, 10**9) == 5_000_000
    assert ledger.borrow(0, OTHER_MN, 1) == 0


def test_release_returns_everything(ledger):
    ledger.first_stage_reserve(2, MN, now=0)
    ledger.second_stage_reserve(2, MN, TrafficType.AUDIO, now=0)
    ledger.confirm(MN, 2, True, now=0)
    assert ledger.release(MN, 2) == 9_750_000
    assert ledger.buffer(2).free == 100_000_000
    assert ledger.release(MN, 2) == 0


def test_emergency_store():
    ledger = ReservationLedger([0], ReservationConfigFactory(emergency_store_fraction=0.1))
    buf = ledger.buffer(0)
    assert buf.emergency == 10_000_000
    assert buf.free == 90_000_000
    ledger.audit()

    assert ledger.release_emergency(0) == 10_000_000
    assert buf.free == 100_000_000
    assert ledger.release_emergency(0) == 0
    ledger.audit()


def test_audit_detects_tampering(ledger):
    ledger.first_stage_reserve(0, MN, now=0)
    ledger.buffer(0).free += 1
    with pytest.raises(LedgerInvariantException, match="AP 0"):
        ledger.audit()


def test_snapshot_rows(ledger):
    ledger.first_stage_reserve(1, MN, now=0)
    rows = ledger.snapshot(5)
    assert len(rows) == 4
    assert rows[1] == {"tick": 5, "ap": 1, "free": 95_000_000, "active_bytes": 0, "passive_bytes": 5_000_000}


@pytest.mark.parametrize(
    "tag, tos_map, expected",
    [
        (46, None, TrafficType.AUDIO),
        (0, None, TrafficType.TEXT),
        (99, None, TrafficType.TEXT),
        (7, {7: "audio"}, TrafficType.AUDIO),
        (46, {7: "audio"}, TrafficType.TEXT),
    ],
)
def test_classify_traffic(tag, tos_map, expected):
    assert classify_traffic(tag, tos_map) == expected


def run_random_operations(n_ops: int, seed: int) -> ReservationLedger:
    rng = np.random.default_rng(seed)
    ledger = ReservationLedger(range(4), ReservationConfigFactory(emergency_store_fraction=0.05))
    now = 0
    for _ in range(n_ops):
        ap = int(rng.integers(4))
        mn = int(rng.integers(6))
        op = int(rng.integers(8))
        try:
            if op == 0:
                ledger.first_stage_reserve(ap, mn, now)
            elif op == 1:
                traffic = TrafficType.AUDIO if rng.random() < 0.5 else TrafficType.TEXT
                ledger.second_stage_reserve(ap, mn, traffic, now)
            elif op == 2:
                ledger.confirm(mn, ap, bool(rng.random() < 0.7), now)
            elif op == 3:
                now += 1
                ledger.expire_and_preempt(now)
            elif op == 4:
                ledger.borrow(ap, mn, int(rng.integers(1, 10_000_000)))
            elif op == 5:
                ledger.release(mn, ap)
            elif op == 6:
                ledger.release_emergency(ap)
            else:
                ledger.first_stage_reserve(ap, mn, now)
        except (DuplicateReservationException, ProtocolOrderException, ReservationDeniedException):
            pass
        ledger.audit()
    return ledger


def test_conservation_under_random_operations():
    ledger = run_random_operations(100_000, seed=3)
    assert all(buf.free >= 0 for buf in ledger.buffers.values())


@pytest.mark.slow
def test_conservation_under_a_million_random_operations():
    run_random_operations(1_000_000, seed=4)
