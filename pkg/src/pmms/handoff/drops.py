import math


def overflow_packets(total_delay_ms: float, drop_threshold_ms: float, proc_rate: float) -> int:
    """Packets arriving while the handoff runs past the threshold (whole packets)."""
    return math.floor(max(0.0, total_delay_ms - drop_threshold_ms) * proc_rate)


def packets_dropped(
    total_delay_ms: float,
    drop_threshold_ms: float,
    proc_rate: float,
    buffered_capacity_packets: int,
) -> int:
    """
    Packets lost to a handoff: the overflow beyond the threshold not absorbed by reserved buffer.

    Args:
        total_delay_ms: Handoff delay
        drop_threshold_ms: Delay the flow tolerates without loss
        proc_rate: Packets per millisecond
        buffered_capacity_packets: Packets the reserved buffer holds

    Returns:
        Dropped packets
    """
    overflow = overflow_packets(total_delay_ms, drop_threshold_ms, proc_rate)
    return max(0, overflow - int(buffered_capacity_packets))


def packets_to_bits(packets: int, packet_size_bytes: int) -> int:
    return packets * packet_size_bytes * 8
