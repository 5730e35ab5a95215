import functools
import sys
from pathlib import Path
from typing import Optional, Tuple

import click
import pandas as pd
from loguru import logger

from .core.config import SimConfig, load_config, parse_override
from .core.exceptions import PmmsException, ReportIOException, map_to_exit_code
from .experiments.base_experiment import BaseExperiment
from .experiments.experiment_accuracy import AccuracyExperiment
from .experiments.experiment_delay import DelayExperiment
from .experiments.experiment_drop import DropExperiment
from .experiments.replications import merge_replications, run_replications
from .experiments.reports import LEDGER_COLUMNS, TRACE_COLUMNS, emit_report, events_frame, rank_frame, write_frame
from .mobility.history import load_history, save_history
from .models.domain import PathHistory
from .prediction.predictor_data_mining import save_rules
from .prediction.predictor_transition_matrix import save_tm
from .topology.grid import build_grid

LOG_FORMAT = "<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | {name}:{function} - <level>{message}</level>"


def configure_logging(level: str) -> None:
    logger.remove()
    logger.add(sys.stderr, level=level.upper(), format=LOG_FORMAT)


def common_options(func):
    """--seed, --config, --out-dir and --set shared by every subcommand."""

    @click.option("--seed", type=int, default=None, help="Master seed (overrides the config file).")
    @click.option(
        "--config",
        "config_path",
        type=click.Path(dir_okay=False),
        default=None,
        help="YAML config file (default: $PMMS_CONFIG).",
    )
    @click.option("--out-dir", type=click.Path(file_okay=False), default="results", show_default=True)
    @click.option("--set", "overrides", multiple=True, metavar="KEY=VALUE", help="Override one config value.")
    @click.option("--progress/--no-progress", default=False, help="Show progress bars.")
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        return func(*args, **kwargs)

    return wrapper


def handle_errors(func):
    """Log library failures and exit with their mapped code."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except PmmsException as e:
            logger.error(f"{type(e).__name__}: {e}")
            sys.exit(map_to_exit_code(e))

    return wrapper


def resolve_config(seed: Optional[int], config_path: Optional[str], overrides: Tuple[str, ...]) -> SimConfig:
    values = dict(parse_override(item) for item in overrides)
    if seed is not None:
        values["seed"] = seed
    return load_config(config_path, values)


def prepare_out_dir(out_dir: str) -> Path:
    path = Path(out_dir)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ReportIOException(f"cannot create output directory: {e}", str(path)) from e
    return path


def read_history(history_path: Optional[str], cfg: SimConfig) -> Optional[PathHistory]:
    if history_path is None:
        return None
    return load_history(history_path, build_grid(cfg.ap_rows, cfg.ap_cols, cfg.ap_spacing))


def write_training(experiment: BaseExperiment, out: Path) -> None:
    save_rules(experiment.rules, out / "rules.csv")
    save_tm(experiment.tm, out / "tm.csv")
    logger.info(f"Mined {len(experiment.rules)} rules; wrote rules.csv and tm.csv to {out}")


def write_accuracy(experiment: AccuracyExperiment, out: Path) -> None:
    report = experiment.run()
    emit_report(report, out / "accuracy.csv")
    write_frame(rank_frame(report), out / "rank_histogram.csv")


def write_delay(experiment: DelayExperiment, out: Path) -> None:
    report = experiment.run()
    emit_report(report, out / "delay.csv")
    write_frame(events_frame(experiment.events), out / "events.csv")
    write_frame(pd.DataFrame(experiment.ledger_rows, columns=LEDGER_COLUMNS), out / "ledger.csv")
    write_frame(pd.DataFrame(experiment.rssi_traces(), columns=TRACE_COLUMNS), out / "rssi_trace.csv")


def write_drops(experiment: DropExperiment, out: Path) -> None:
    emit_report(experiment.run(), out / "drops.csv")


def write_replications(cfg: SimConfig, experiment: str, out: Path) -> None:
    if cfg.replications <= 1:
        return
    seeds = [cfg.seed + offset for offset in range(cfg.replications)]
    reports = run_replications(cfg, seeds, cfg.workers, experiment)
    write_frame(merge_replications(reports), out / f"replications_{experiment}.csv")


@click.group()
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default="INFO",
    show_default=True,
)
def cli(log_level: str) -> None:
    """Predictive mobility management simulator for 802.11 handoffs."""
    configure_logging(log_level)


@cli.command("generate-history")
@common_options
@handle_errors
def generate_history_command(seed, config_path, out_dir, overrides, progress) -> None:
    """Generate the mobility-path history and write history.txt."""
    cfg = resolve_config(seed, config_path, overrides)
    out = prepare_out_dir(out_dir)
    save_history(BaseExperiment(cfg, progress=progress).history, out / "history.txt")


@cli.command("train")
@common_options
@click.option("--history", "history_path", type=click.Path(dir_okay=False, exists=True), default=None)
@handle_errors
def train_command(seed, config_path, out_dir, overrides, progress, history_path) -> None:
    """Mine mobility rules and the transition matrix from a history (generated when not given)."""
    cfg = resolve_config(seed, config_path, overrides)
    out = prepare_out_dir(out_dir)
    write_training(BaseExperiment(cfg, read_history(history_path, cfg), progress), out)


@cli.command("accuracy")
@common_options
@click.option("--history", "history_path", type=click.Path(dir_okay=False, exists=True), default=None)
@handle_errors
def accuracy_command(seed, config_path, out_dir, overrides, progress, history_path) -> None:
    """Score every predictor and write accuracy.csv and rank_histogram.csv."""
    cfg = resolve_config(seed, config_path, overrides)
    out = prepare_out_dir(out_dir)
    write_accuracy(AccuracyExperiment(cfg, read_history(history_path, cfg), progress), out)
    write_replications(cfg, "accuracy", out)


@cli.command("delay")
@common_options
@click.option("--history", "history_path", type=click.Path(dir_okay=False, exists=True), default=None)
@handle_errors
def delay_command(seed, config_path, out_dir, overrides, progress, history_path) -> None:
    """Simulate handoffs with reservation and write delay, event, ledger and RSSI trace CSVs."""
    cfg = resolve_config(seed, config_path, overrides)
    out = prepare_out_dir(out_dir)
    write_delay(DelayExperiment(cfg, read_history(history_path, cfg), progress), out)
    write_replications(cfg, "delay", out)


@cli.command("drops")
@common_options
@click.option("--history", "history_path", type=click.Path(dir_okay=False, exists=True), default=None)
@handle_errors
def drops_command(seed, config_path, out_dir, overrides, progress, history_path) -> None:
    """Compare dropped traffic with and without reservation and write drops.csv."""
    cfg = resolve_config(seed, config_path, overrides)
    out = prepare_out_dir(out_dir)
    write_drops(DropExperiment(cfg, read_history(history_path, cfg), progress), out)
    write_replications(cfg, "drops", out)


@cli.command("all")
@common_options
@handle_errors
def all_command(seed, config_path, out_dir, overrides, progress) -> None:
    """Run history generation, training and the three experiments on one shared history."""
    cfg = resolve_config(seed, config_path, overrides)
    out = prepare_out_dir(out_dir)

    accuracy = AccuracyExperiment(cfg, progress=progress)
    history = accuracy.history
    save_history(history, out / "history.txt")
    write_training(accuracy, out)
    write_accuracy(accuracy, out)
    write_delay(DelayExperiment(cfg, history, progress), out)
    write_drops(DropExperiment(cfg, history, progress), out)
    for experiment in ("accuracy", "delay", "drops"):
        write_replications(cfg, experiment, out)
    logger.info(f"All experiments finished; results in {out}")


if __name__ == "__main__":
    cli()
