from .generator import (
    choose_next_region,
    generate_history,
    generate_path,
    nearest_ap,
    next_region_weights,
    validate_path,
)
from .history import format_path, load_history, parse_path_line, save_history

__all__ = [
    "choose_next_region",
    "format_path",
    "generate_history",
    "generate_path",
    "load_history",
    "nearest_ap",
    "next_region_weights",
    "parse_path_line",
    "save_history",
    "validate_path",
]
