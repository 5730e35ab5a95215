from .propagation import SPEED_OF_LIGHT, apply_noise, friis_rssi, reported_rssi, sample_rssi
from .thresholds import TraceSample, classify_threshold, first_event_index, rssi_trace

__all__ = [
    "SPEED_OF_LIGHT",
    "TraceSample",
    "apply_noise",
    "classify_threshold",
    "first_event_index",
    "friis_rssi",
    "reported_rssi",
    "rssi_trace",
    "sample_rssi",
]
