from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from loguru import logger

from ..core.config import ReservationConfig
from ..core.exceptions import (
    DuplicateReservationException,
    LedgerInvariantException,
    ProtocolOrderException,
    ReservationDeniedException,
)
from ..models.domain import ApId, Reservation, ReservationStage, ReservationState, TrafficType


@dataclass
class Loan:
    borrower: int
    reservation: Reservation
    nbytes: int


@dataclass
class ApBuffer:
    """Buffer accounting of one AP. Lent bytes stay counted as passive."""

    ap: ApId
    total: int
    free: int
    emergency: int = 0
    reservations: Dict[Tuple[int, ReservationStage], Reservation] = field(default_factory=dict)
    loans: List[Loan] = field(default_factory=list)

    def held(self, state: ReservationState) -> int:
        return sum(r.bytes for r in self.reservations.values() if r.state == state)

    @property
    def active_bytes(self) -> int:
        return self.held(ReservationState.ACTIVE)

    @property
    def passive_bytes(self) -> int:
        return self.held(ReservationState.PASSIVE)


class ReservationLedger:
    """
    Per-AP two-stage buffer reservations.

    Conservation: free + active + passive + emergency = total on every AP after every operation.
    Single writer; mutations happen in tick order.
    """

    def __init__(self, ap_ids: Iterable[ApId], cfg: ReservationConfig) -> None:
        self.cfg = cfg
        emergency = int(cfg.buffer_size * cfg.emergency_store_fraction)
        self.buffers: Dict[ApId, ApBuffer] = {
            ap: ApBuffer(ap=ap, total=cfg.buffer_size, free=cfg.buffer_size - emergency, emergency=emergency)
            for ap in ap_ids
        }

    def buffer(self, ap: ApId) -> ApBuffer:
        return self.buffers[ap]

    def first_stage_reserve(self, ap: ApId, mn: int, now: int) -> Reservation:
        """
        Hold stage1_fraction of the AP's free bytes for a predicted handoff, with a timer.

        Raises:
            DuplicateReservationException: A live stage-1 already exists for (mn, ap)
            ReservationDeniedException: No free bytes to reserve
        """
        buf = self.buffers[ap]
        if (mn, ReservationStage.ONE) in buf.reservations:
            raise DuplicateReservationException(f"MN {mn} already holds a stage-1 reservation on AP {ap}")
        nbytes = int(buf.free * self.cfg.stage1_fraction)
        if nbytes <= 0:
            raise ReservationDeniedException(f"AP {ap} has no free buffer for MN {mn} ({buf.free} bytes)")

        reservation = Reservation(
            ap=ap,
            mn=mn,
            stage=ReservationStage.ONE,
            bytes=nbytes,
            expires_at=now + self.cfg.reservation_timeout,
            created_at=now,
        )
        buf.free -= nbytes
        buf.reservations[(mn, ReservationStage.ONE)] = reservation
        logger.debug(f"Stage-1 reservation of {nbytes} bytes on AP {ap} for MN {mn} until tick {reservation.expires_at}")
        return reservation

    def second_stage_reserve(self, ap: ApId, mn: int, traffic: TrafficType, now: int) -> Reservation:
        """
        Add traffic-dependent passive bytes on top of a live stage-1 reservation.

        Raises:
            ProtocolOrderException: No unexpired passive stage-1 for (mn, ap)
            DuplicateReservationException: Stage-2 already held
            ReservationDeniedException: No free bytes to reserve
        """
        buf = self.buffers[ap]
        stage_one = buf.reservations.get((mn, ReservationStage.ONE))
        if stage_one is None or stage_one.state != ReservationState.PASSIVE or stage_one.expires_at <= now:
            raise ProtocolOrderException(f"stage-2 for MN {mn} on AP {ap} without a live stage-1 reservation")
        if (mn, ReservationStage.TWO) in buf.reservations:
            raise DuplicateReservationException(f"MN {mn} already holds a stage-2 reservation on AP {ap}")

        fraction = self.cfg.stage2_audio_fraction if traffic == TrafficType.AUDIO else self.cfg.stage2_text_fraction
        nbytes = int(buf.free * fraction)
        if nbytes <= 0:
            raise ReservationDeniedException(f"AP {ap} has no free buffer for MN {mn} ({buf.free} bytes)")

        reservation = Reservation(
            ap=ap,
            mn=mn,
            stage=ReservationStage.TWO,
            bytes=nbytes,
            expires_at=stage_one.expires_at,
            created_at=now,
        )
        buf.free -= nbytes
        buf.reservations[(mn, ReservationStage.TWO)] = reservation
        logger.debug(f"Stage-2 {traffic.value} reservation of {nbytes} bytes on AP {ap} for MN {mn}")
        return reservation

    def confirm(self, mn: int, ap: ApId, flag: bool, now: int) -> None:
        """
        Confirm flag from the new AP: true activates both stages and preempts borrowers, false releases them.
        """
        buf = self.buffers[ap]
        owned = [r for (owner, _), r in buf.reservations.items() if owner == mn and r.state == ReservationState.PASSIVE]
        if not owned:
            logger.debug(f"Confirm({flag}) for MN {mn} on AP {ap} at tick {now} with nothing reserved")
            return

        if not flag:
            for reservation in owned:
                self._drop(buf, reservation)
            return

        for reservation in owned:
            self._end_loans(buf, reservation)
            reservation.state = ReservationState.ACTIVE
            reservation.expires_at = None
        logger.debug(f"Confirmed {sum(r.bytes for r in owned)} bytes on AP {ap} for MN {mn} at tick {now}")

    def expire_and_preempt(self, now: int) -> int:
        """
        Release every passive reservation whose timer has run out.

        Returns:
            Number of reservations reclaimed
        """
        reclaimed = 0
        for buf in self.buffers.values():
            for reservation in list(buf.reservations.values()):
                if reservation.state == ReservationState.PASSIVE and reservation.expires_at <= now:
                    self._drop(buf, reservation)
                    reclaimed += 1
        if reclaimed:
            logger.debug(f"Expired {reclaimed} reservations at tick {now}")
        return reclaimed

    def borrow(self, ap: ApId, borrower: int, nbytes: int) -> int:
        """
        Lend passive bytes of an AP to a competing flow. The owner preempts the loan on confirmation.

        Returns:
            Bytes actually lent (at most `nbytes`)
        """
        buf = self.buffers[ap]
        lent = 0
        for reservation in buf.reservations.values():
            if lent >= nbytes:
                break
            if reservation.state != ReservationState.PASSIVE or reservation.mn == borrower:
                continue
            amount = min(reservation.bytes - reservation.lent, nbytes - lent)
            if amount <= 0:
                continue
            reservation.lent += amount
            buf.loans.append(Loan(borrower=borrower, reservation=reservation, nbytes=amount))
            lent += amount
        logger.debug(f"Lent {lent} passive bytes on AP {ap} to flow {borrower}")
        return lent

    def release(self, mn: int, ap: ApId) -> int:
        """
        The MN left the AP: everything it holds there returns to free.

        Returns:
            Bytes released
        """
        buf = self.buffers[ap]
        released = 0
        for (owner, _), reservation in list(buf.reservations.items()):
            if owner == mn:
                released += reservation.bytes
                self._drop(buf, reservation)
        return released

    def release_emergency(self, ap: ApId) -> int:
        """Hand the emergency store of an AP to free on an emergency flag."""
        buf = self.buffers[ap]
        released, buf.emergency = buf.emergency, 0
        buf.free += released
        if released:
            logger.warning(f"Released {released} emergency bytes on AP {ap}")
        return released

    def reserved_bytes(self, mn: int, ap: ApId, state: Optional[ReservationState] = None) -> int:
        buf = self.buffers[ap]
        return sum(
            r.bytes
            for (owner, _), r in buf.reservations.items()
            if owner == mn and (state is None or r.state == state)
        )

    def audit(self) -> None:
        """
        Raises:
            LedgerInvariantException: Conservation broken or free bytes negative on some AP
        """
        for buf in self.buffers.values():
            accounted = buf.free + buf.active_bytes + buf.passive_bytes + buf.emergency
            if accounted != buf.total or buf.free < 0:
                raise LedgerInvariantException(
                    f"AP {buf.ap}: free {buf.free} + active {buf.active_bytes} + passive {buf.passive_bytes} "
                    f"+ emergency {buf.emergency} != total {buf.total}"
                )
            for reservation in buf.reservations.values():
                if reservation.bytes <= 0 or reservation.lent > reservation.bytes:
                    raise LedgerInvariantException(f"AP {buf.ap}: malformed reservation {reservation}")

    def snapshot(self, tick: int) -> List[Dict[str, int]]:
        return [
            {
                "tick": tick,
                "ap": buf.ap,
                "free": buf.free,
                "active_bytes": buf.active_bytes,
                "passive_bytes": buf.passive_bytes,
            }
            for buf in self.buffers.values()
        ]

    def _drop(self, buf: ApBuffer, reservation: Reservation) -> None:
        self._end_loans(buf, reservation)
        buf.free += reservation.bytes
        reservation.bytes = 0
        reservation.state = ReservationState.EXPIRED
        buf.reservations.pop((reservation.mn, reservation.stage), None)

    def _end_loans(self, buf: ApBuffer, reservation: Reservation) -> None:
        if not reservation.lent:
            return
        preempted = [loan for loan in buf.loans if loan.reservation is reservation]
        buf.loans = [loan for loan in buf.loans if loan.reservation is not reservation]
        reservation.lent = 0
        for loan in preempted:
            logger.debug(f"Preempted {loan.nbytes} bytes lent to flow {loan.borrower} on AP {buf.ap}")


def first_stage_reserve(ledger: ReservationLedger, ap: ApId, mn: int, now: int) -> Reservation:
    return ledger.first_stage_reserve(ap, mn, now)


def second_stage_reserve(
    ledger: ReservationLedger, ap: ApId, mn: int, traffic: TrafficType, now: int
) -> Reservation:
    return ledger.second_stage_reserve(ap, mn, traffic, now)


def confirm(ledger: ReservationLedger, mn: int, ap: ApId, flag: bool, now: int) -> None:
    ledger.confirm(mn, ap, flag, now)


def expire_and_preempt(ledger: ReservationLedger, now: int) -> int:
    return ledger.expire_and_preempt(now)


def classify_traffic(flow_tag: int, tos_map: Optional[Mapping[int, str]] = None) -> TrafficType:
    """Map a type-of-service tag to a traffic class; unknown tags are text."""
    tos_map = tos_map if tos_map is not None else ReservationConfig().tos_map
    return TrafficType(tos_map.get(flow_tag, TrafficType.TEXT.value))
