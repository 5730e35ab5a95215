from .ledger import (
    ApBuffer,
    ReservationLedger,
    classify_traffic,
    confirm,
    expire_and_preempt,
    first_stage_reserve,
    second_stage_reserve,
)

__all__ = [
    "ApBuffer",
    "ReservationLedger",
    "classify_traffic",
    "confirm",
    "expire_and_preempt",
    "first_stage_reserve",
    "second_stage_reserve",
]
