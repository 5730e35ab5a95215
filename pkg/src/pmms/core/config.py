import os
import re
from functools import lru_cache
from typing import Annotated, Any, Callable, Dict, Literal, Mapping, Optional, Tuple

import yaml
from loguru import logger
from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, ValidationError, model_validator

from .exceptions import ConfigurationException

DEFAULT_CONFIG_PATH = os.path.join("configs", "simulation_configs.yaml")
CONFIG_ENV_VAR = "PMMS_CONFIG"

# unit tables per quantity kind, scaled to the canonical unit of that kind
_UNITS: Dict[str, Dict[str, float]] = {
    "bytes": {"": 1.0, "b": 1.0, "byte": 1.0, "bytes": 1.0, "kb": 1e3, "mb": 1e6, "gb": 1e9},
    "ms": {"": 1.0, "ms": 1.0, "msec": 1.0, "us": 1e-3, "usec": 1e-3, "s": 1e3, "sec": 1e3},
    "watts": {"": 1.0, "w": 1.0, "mw": 1e-3, "uw": 1e-6, "nw": 1e-9},
    "hz": {"": 1.0, "hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9},
    "meters": {"": 1.0, "m": 1.0, "cm": 1e-2, "km": 1e3},
    "count": {"": 1.0, "packets": 1.0, "nodes": 1.0, "packets/sec": 1.0, "packets/s": 1.0},
}

_QUANTITY_PATTERN = re.compile(r"^(?P<number>[-+0-9.eE*\s]+?)\s*(?P<unit>[A-Za-z/]*)$")
_RANGE_SEPARATORS = (" to ", "–")


def parse_quantity(kind: str, value: Any) -> Any:
    """
    Parse a unit-bearing quantity such as "2 msec", "100 MB" or "2*1e6 Hz".

    Plain numbers are taken to be in the canonical unit of `kind` already.

    Args:
        kind: Quantity kind, one of the keys of the unit table
        value: Number or unit string

    Returns:
        The value in canonical units, or the input unchanged when it is not a string
    """
    if not isinstance(value, str):
        return value

    text = value.strip()
    for prefix in (">=", "<=", "≥", "≤"):
        if text.startswith(prefix):
            text = text[len(prefix) :].strip()

    match = _QUANTITY_PATTERN.match(text)
    if match is None:
        raise ValueError(f"Cannot parse quantity: {value!r}")

    number = 1.0
    for factor in match.group("number").split("*"):
        number *= float(factor)

    unit = match.group("unit").lower()
    units = _UNITS[kind]
    if unit not in units:
        raise ValueError(f"Unknown unit {match.group('unit')!r} for {kind} in {value!r}")
    return number * units[unit]


def parse_band(kind: str, value: Any) -> Any:
    """
    Parse a range such as "3 mW to 4 mW", "1–2 mW" or a two-element list.

    Args:
        kind: Quantity kind of both ends
        value: String or sequence

    Returns:
        (low, high) in canonical units
    """
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"A band needs exactly two values, got {value!r}")
        return (parse_quantity(kind, value[0]), parse_quantity(kind, value[1]))

    if isinstance(value, str):
        for separator in _RANGE_SEPARATORS:
            if separator in value:
                low, high = (part.strip() for part in value.split(separator, 1))
                # "1–2 mW": the unit is only written on the upper end
                low_match = _QUANTITY_PATTERN.match(low)
                high_match = _QUANTITY_PATTERN.match(high)
                if low_match and high_match and not low_match.group("unit"):
                    low = f"{low} {high_match.group('unit')}"
                return (parse_quantity(kind, low), parse_quantity(kind, high))
        raise ValueError(f"Cannot parse band: {value!r}")

    return value


def _quantity(kind: str) -> Callable[[Any], Any]:
    return lambda value: parse_quantity(kind, value)


def _band(kind: str) -> Callable[[Any], Any]:
    return lambda value: parse_band(kind, value)


Bytes = Annotated[int, BeforeValidator(lambda value: round(parse_quantity("bytes", value)))]
Millis = Annotated[float, BeforeValidator(_quantity("ms"))]
Watts = Annotated[float, BeforeValidator(_quantity("watts"))]
Hertz = Annotated[float, BeforeValidator(_quantity("hz"))]
Meters = Annotated[float, BeforeValidator(_quantity("meters"))]
Count = Annotated[float, BeforeValidator(_quantity("count"))]
WattBand = Annotated[Tuple[float, float], BeforeValidator(_band("watts"))]
CountBand = Annotated[Tuple[float, float], BeforeValidator(_band("count"))]


class RadioConfig(BaseModel):
    """
    Configuration for the Friis model and RSSI thresholds. Powers in watts.
    """

    trans_power: float = 0.100
    gain_t: float = 1.0
    gain_r: float = 1.0
    frequency: float = 914e6
    loss: float = 1.0
    rssi_max: float = 0.100
    rssi_warning_band: Tuple[float, float] = (3e-3, 4e-3)
    rssi_handoff_band: Tuple[float, float] = (1e-3, 2e-3)
    next_handoff_threshold: float = 65e-3
    receive_threshold: float = 1.427e-8
    noise_stddev_fraction: float = 0.0
    rssi_reference_distance: float = 10.0
    min_distance: float = 0.1
    antenna_height: float = 1.5
    n_channels: int = 11

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_bounds(self) -> "RadioConfig":
        if self.loss < 1:
            raise ValueError(f"loss must be >= 1, got {self.loss}")
        if min(self.trans_power, self.rssi_max, self.receive_threshold, self.frequency) <= 0:
            raise ValueError("all powers and the frequency must be positive")
        if self.rssi_warning_band[0] <= self.rssi_handoff_band[1]:
            raise ValueError(
                f"warning band {self.rssi_warning_band} must lie strictly above handoff band {self.rssi_handoff_band}"
            )
        if self.noise_stddev_fraction < 0:
            raise ValueError("noise_stddev_fraction must be >= 0")
        return self


class MobilityConfig(BaseModel):
    """
    Configuration for the region walk that generates mobile paths.
    """

    min_aps: int = 3
    max_aps: int = 6
    center_bias: float = 0.3
    heading_persistence: float = 0.1
    center_scale: float = 1.0
    drift_weight: float = 0.6
    # (d_row, d_col); the default pulls every MN towards the AP 0 corner
    drift_direction: Tuple[int, int] = (-1, -1)
    dwell_min: int = 1
    dwell_max: int = 5
    max_moves: int = 1000

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_bounds(self) -> "MobilityConfig":
        if self.min_aps < 2 or self.max_aps < self.min_aps:
            raise ValueError(f"impossible path length range [{self.min_aps}, {self.max_aps}]")
        shares = (self.center_bias, self.heading_persistence, self.drift_weight)
        if not all(0 <= share <= 1 for share in shares):
            raise ValueError("center_bias, heading_persistence and drift_weight must lie in [0, 1]")
        if sum(shares) > 1:
            raise ValueError("center_bias + heading_persistence + drift_weight must not exceed 1")
        if self.drift_weight > 0 and self.drift_direction == (0, 0):
            raise ValueError("drift_direction must be non-zero when drift_weight > 0")
        if self.dwell_min < 1 or self.dwell_max < self.dwell_min:
            raise ValueError(f"invalid dwell range [{self.dwell_min}, {self.dwell_max}]")
        return self


class PredictionConfig(BaseModel):
    """
    Configuration for rule mining and the predictors.
    """

    min_support: int = 2
    min_confidence: float = 0.10
    max_head_len: int = 4
    lt_margin: float = 0.10
    lt_floor: float = 1.427e-8
    tm_top_x: int = 1
    lt_sample_fraction: float = 0.5
    lt_error_rate: float = 0.0

    model_config = ConfigDict(frozen=True)


class DelayConfig(BaseModel):
    """
    Configuration for the handoff delay model. Times in milliseconds.
    """

    min_channel_time: float = 2.0
    max_channel_time: float = 6.0
    ping_time: float = 3.0
    oneway_time: float = 2.0
    n_channels: int = 11
    load_surcharges: Dict[str, float] = Field(default_factory=lambda: {"low": 0.0, "medium": 2.0, "high": 5.0})
    load_low_max: int = 5
    load_high_min: int = 10
    iapp_enabled: bool = True
    proc_cap: float = 1_000_000.0
    arrival_rates: Dict[str, float] = Field(
        default_factory=lambda: {"low": 150_000.0, "medium": 650_000.0, "high": 950_000.0}
    )
    packet_delay_mode: Literal["standard", "verbatim"] = "standard"
    drop_threshold_ms: float = 20.0
    packet_size_bytes: int = 1500
    background_load_mean: float = 2.0

    model_config = ConfigDict(frozen=True)

    @property
    def proc_rate_per_ms(self) -> float:
        return self.proc_cap / 1000.0


class ReservationConfig(BaseModel):
    """
    Configuration for the two-stage buffer reservation ledger.
    """

    buffer_size: int = 100_000_000
    stage1_fraction: float = 0.05
    stage2_audio_fraction: float = 0.05
    stage2_text_fraction: float = 0.02
    reservation_timeout: int = 2
    emergency_store_fraction: float = 0.0
    tos_map: Dict[int, Literal["audio", "text"]] = Field(default_factory=lambda: {46: "audio", 0: "text"})

    model_config = ConfigDict(frozen=True)


class SimConfig(BaseModel):
    """
    Complete simulation configuration.

    Simulation variables are addressed by their printed names and accept unit strings such as "2 msec" or
    "100 MB"; every other knob uses snake_case. Unknown keys are rejected.
    """

    # simulation variables
    buffer_size: Bytes = 100_000_000
    audio_file_size: Bytes = 20_000_000
    text_file_size: Bytes = 5_000_000
    min_channel_time: Millis = Field(2.0, alias="minChannelTime")
    max_channel_time: Millis = Field(6.0, alias="maxChannelTime")
    ping_time: Millis = Field(3.0, alias="pingTime")
    oneway_time: Millis = Field(2.0, alias="onewayTime")
    rssi_max: Watts = Field(0.100, alias="RSSI_max")
    rssi_threshold: WattBand = Field((3e-3, 4e-3), alias="RSSI_threshold")
    rssi_handoff: WattBand = Field((1e-3, 2e-3), alias="RSSI_handoff")
    antenna_height: Meters = 1.5
    wireless_frequency: Hertz = 914e6
    bandwidth: Hertz = 2e6
    receivepower_threshold: Watts = 1.427e-8
    trans_power: Watts = 0.100
    proc_cap: Count = 1_000_000
    arrivalrate_max: Count = 950_000
    arrivalrate_avg: Count = 650_000
    arrivalrate_min: Count = 150_000
    load_max: Count = Field(10, alias="loadMax")
    load_avg: CountBand = Field((5, 10), alias="loadAvg")
    load_min: CountBand = Field((1, 5), alias="loadMin")

    # run control
    seed: int = 42
    history_seed: Optional[int] = None
    test_seed: Optional[int] = None
    n_history: int = 10_000
    n_test: int = 1_000
    replications: int = 1
    workers: int = 1

    # topology and radio
    ap_rows: int = 5
    ap_cols: int = 5
    ap_spacing: Meters = 100.0
    gain_t: float = 1.0
    gain_r: float = 1.0
    loss: float = 1.0
    noise_stddev_fraction: float = 0.0
    next_handoff_threshold: Watts = 65e-3
    rssi_reference_distance: Meters = 10.0
    min_distance: Meters = 0.1
    n_channels: int = 11
    samples_per_move: int = 10

    # mobility
    center_bias: float = 0.3
    heading_persistence: float = 0.1
    center_scale: float = 1.0
    drift_weight: float = 0.6
    drift_direction: Tuple[int, int] = (-1, -1)
    dwell_min: int = 1
    dwell_max: int = 5
    test_min_aps: int = 3
    test_max_aps: int = 6
    history_min_aps: int = 2
    history_max_aps: int = 6
    max_moves_per_path: int = 1000

    # prediction
    min_support: int = 2
    min_confidence: float = 0.10
    max_head_len: int = 4
    lt_margin: float = 0.10
    tm_top_x: int = 1
    lt_sample_fraction: float = 0.5
    lt_error_rate: float = 0.0

    # handoff
    load_surcharge_low: Millis = 0.0
    load_surcharge_medium: Millis = 2.0
    load_surcharge_high: Millis = 5.0
    background_load_mean: float = 2.0
    iapp_enabled: bool = True
    packet_delay_mode: Literal["standard", "verbatim"] = "standard"
    drop_threshold_ms: Millis = 20.0
    packet_size_bytes: Bytes = 1500
    handoff_predictor: str = "ltdmps_partial"

    # reservation
    stage1_fraction: float = 0.05
    stage2_audio_fraction: float = 0.05
    stage2_text_fraction: float = 0.02
    reservation_timeout: int = 2
    emergency_store_fraction: float = 0.0
    audio_share: float = 0.5
    tos_map: Dict[int, Literal["audio", "text"]] = Field(default_factory=lambda: {46: "audio", 0: "text"})

    model_config = ConfigDict(extra="forbid", populate_by_name=True, frozen=True)

    @model_validator(mode="after")
    def check_consistency(self) -> "SimConfig":
        if self.ap_rows < 2 or self.ap_cols < 2:
            raise ValueError(f"AP grid must be at least 2x2, got {self.ap_rows}x{self.ap_cols}")
        if not self.arrivalrate_min <= self.arrivalrate_avg <= self.arrivalrate_max < self.proc_cap:
            raise ValueError("arrival rates must satisfy min <= avg <= max < proc_cap")
        if self.min_channel_time > self.max_channel_time:
            raise ValueError("minChannelTime must not exceed maxChannelTime")
        if self.min_support < 1:
            raise ValueError(f"min_support must be >= 1, got {self.min_support}")
        if not 0 <= self.lt_sample_fraction <= 1 or not 0 <= self.lt_error_rate <= 1:
            raise ValueError("lt_sample_fraction and lt_error_rate must lie in [0, 1]")
        if self.center_bias + self.heading_persistence + self.drift_weight > 1:
            raise ValueError("center_bias + heading_persistence + drift_weight must not exceed 1")
        if not 0 <= self.audio_share <= 1:
            raise ValueError("audio_share must lie in [0, 1]")
        if self.n_history < 1 or self.n_test < 1:
            raise ValueError("n_history and n_test must be >= 1")
        return self

    def radio_config(self) -> RadioConfig:
        return RadioConfig(
            trans_power=self.trans_power,
            gain_t=self.gain_t,
            gain_r=self.gain_r,
            frequency=self.wireless_frequency,
            loss=self.loss,
            rssi_max=self.rssi_max,
            rssi_warning_band=self.rssi_threshold,
            rssi_handoff_band=self.rssi_handoff,
            next_handoff_threshold=self.next_handoff_threshold,
            receive_threshold=self.receivepower_threshold,
            noise_stddev_fraction=self.noise_stddev_fraction,
            rssi_reference_distance=self.rssi_reference_distance,
            min_distance=self.min_distance,
            antenna_height=self.antenna_height,
            n_channels=self.n_channels,
        )

    def mobility_config(self, history: bool = False) -> MobilityConfig:
        return MobilityConfig(
            min_aps=self.history_min_aps if history else self.test_min_aps,
            max_aps=self.history_max_aps if history else self.test_max_aps,
            center_bias=self.center_bias,
            heading_persistence=self.heading_persistence,
            center_scale=self.center_scale,
            drift_weight=self.drift_weight,
            drift_direction=self.drift_direction,
            dwell_min=self.dwell_min,
            dwell_max=self.dwell_max,
            max_moves=self.max_moves_per_path,
        )

    def prediction_config(self) -> PredictionConfig:
        return PredictionConfig(
            min_support=self.min_support,
            min_confidence=self.min_confidence,
            max_head_len=self.max_head_len,
            lt_margin=self.lt_margin,
            lt_floor=self.receivepower_threshold,
            tm_top_x=self.tm_top_x,
            lt_sample_fraction=self.lt_sample_fraction,
            lt_error_rate=self.lt_error_rate,
        )

    def delay_config(self) -> DelayConfig:
        return DelayConfig(
            min_channel_time=self.min_channel_time,
            max_channel_time=self.max_channel_time,
            ping_time=self.ping_time,
            oneway_time=self.oneway_time,
            n_channels=self.n_channels,
            load_surcharges={
                "low": self.load_surcharge_low,
                "medium": self.load_surcharge_medium,
                "high": self.load_surcharge_high,
            },
            load_low_max=int(self.load_min[1]),
            load_high_min=int(self.load_max),
            iapp_enabled=self.iapp_enabled,
            proc_cap=self.proc_cap,
            arrival_rates={
                "low": self.arrivalrate_min,
                "medium": self.arrivalrate_avg,
                "high": self.arrivalrate_max,
            },
            packet_delay_mode=self.packet_delay_mode,
            drop_threshold_ms=self.drop_threshold_ms,
            packet_size_bytes=self.packet_size_bytes,
            background_load_mean=self.background_load_mean,
        )

    def reservation_config(self) -> ReservationConfig:
        return ReservationConfig(
            buffer_size=self.buffer_size,
            stage1_fraction=self.stage1_fraction,
            stage2_audio_fraction=self.stage2_audio_fraction,
            stage2_text_fraction=self.stage2_text_fraction,
            reservation_timeout=self.reservation_timeout,
            emergency_store_fraction=self.emergency_store_fraction,
            tos_map=self.tos_map,
        )

    def with_overrides(self, **overrides: Any) -> "SimConfig":
        """
        Return a validated copy with some values replaced.
        """
        data = self.model_dump(by_alias=True)
        data.update(normalize_keys(overrides))
        return build_config(data)


def load_yaml_config(config_path: str) -> Dict[str, Any]:
    """
    Load configuration from YAML file.

    Args:
        config_path: Path to the YAML configuration file

    Returns:
        Dictionary containing the configuration
    """
    if not os.path.exists(config_path):
        raise ConfigurationException(f"Config file not found: {config_path}")

    with open(config_path, "r", encoding="utf-8") as f:
        try:
            config = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigurationException(f"Error parsing YAML config {config_path}: {e}")

    if config is None:
        config = {}
    if not isinstance(config, dict):
        raise ConfigurationException(f"Config file {config_path} did not produce a dictionary.")

    logger.debug(f"Loaded config from {config_path}")
    return config


def normalize_keys(data: Mapping[str, Any]) -> Dict[str, Any]:
    """
    Rewrite snake_case field names to their printed aliases so file values and overrides merge on one key.
    """
    aliases = {name: field.alias for name, field in SimConfig.model_fields.items() if field.alias}
    return {aliases.get(key, key): value for key, value in data.items()}


def build_config(data: Mapping[str, Any]) -> SimConfig:
    """
    Validate a flat mapping into a SimConfig.

    Args:
        data: Flat key/value mapping (printed names or knob names)

    Returns:
        SimConfig instance
    """
    try:
        return SimConfig.model_validate(normalize_keys(data))
    except ValidationError as e:
        raise ConfigurationException(f"Invalid configuration: {e}") from e


def parse_override(item: str) -> Tuple[str, Any]:
    """
    Parse a `key=value` command line override. The value is read as YAML so numbers,
    booleans and lists keep their types while unit strings stay strings.
    """
    if "=" not in item:
        raise ConfigurationException(f"Override must look like key=value, got {item!r}")
    key, raw = item.split("=", 1)
    try:
        value = yaml.safe_load(raw)
    except yaml.YAMLError as e:
        raise ConfigurationException(f"Cannot parse override {item!r}: {e}")
    return key.strip(), value


def load_config(config_path: Optional[str] = None, overrides: Optional[Mapping[str, Any]] = None) -> SimConfig:
    """
    Resolve the configuration: defaults < file < overrides.

    The file is `config_path`, else the path in $PMMS_CONFIG, else none.

    Args:
        config_path: Optional path to a YAML config file
        overrides: Optional values that win over the file

    Returns:
        SimConfig instance
    """
    path = config_path or os.environ.get(CONFIG_ENV_VAR)
    data: Dict[str, Any] = normalize_keys(load_yaml_config(path)) if path else {}
    if overrides:
        data.update(normalize_keys(overrides))

    config = build_config(data)
    logger.info(f"Initialized configuration (source: {path or 'defaults'}, seed: {config.seed})")
    return config


@lru_cache()
def get_settings() -> SimConfig:
    """
    Get the default configuration with caching.

    Returns:
        SimConfig loaded from $PMMS_CONFIG, else the shipped default file when present, else defaults
    """
    path = os.environ.get(CONFIG_ENV_VAR)
    if path is None and os.path.exists(DEFAULT_CONFIG_PATH):
        path = DEFAULT_CONFIG_PATH
    return load_config(path)
