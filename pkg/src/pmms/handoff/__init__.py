from .delays import (
    auth_delay,
    classify_load,
    load_surcharge,
    packet_delay,
    packet_delay_ms,
    prediction_penalty,
    reassoc_delay,
    scan_delay,
)
from .drops import overflow_packets, packets_dropped, packets_to_bits
from .simulator import HandoffSimulator
from .state_machine import HandoffContext, draw_attached, execute_handoff, initial_association

__all__ = [
    "HandoffContext",
    "HandoffSimulator",
    "auth_delay",
    "classify_load",
    "draw_attached",
    "execute_handoff",
    "initial_association",
    "load_surcharge",
    "overflow_packets",
    "packet_delay",
    "packet_delay_ms",
    "packets_dropped",
    "packets_to_bits",
    "prediction_penalty",
    "reassoc_delay",
    "scan_delay",
]
