import sys

import pandas as pd
import pytest
from click.testing import CliRunner
from loguru import logger

from pmms.main import cli

SMALL = ["--set", "n_history=200", "--set", "n_test=5"]
ALL_OUTPUTS = [
    "accuracy.csv",
    "delay.csv",
    "drops.csv",
    "events.csv",
    "history.txt",
    "ledger.csv",
    "rank_histogram.csv",
    "rssi_trace.csv",
    "rules.csv",
    "tm.csv",
]


@pytest.fixture(autouse=True)
def isolated_environment(monkeypatch):
    monkeypatch.delenv("PMMS_CONFIG", raising=False)
    yield
    # the CLI points loguru at the runner's captured stderr
    logger.remove()
    logger.add(sys.stderr)


def invoke(*args: str):
    return CliRunner().invoke(cli, ["--log-level", "WARNING", *args])


def test_all_is_reproducible(tmp_path):
    first, second = tmp_path / "first", tmp_path / "second"
    for out in (first, second):
        result = invoke("all", "--seed", "7", *SMALL, "--out-dir", str(out))
        assert result.exit_code == 0, result.output

    assert sorted(path.name for path in first.iterdir()) == ALL_OUTPUTS
    for name in ALL_OUTPUTS:
        assert (first / name).read_bytes() == (second / name).read_bytes(), name


def test_generate_history(tmp_path):
    result = invoke("generate-history", "--seed", "3", "--set", "n_history=25", "--out-dir", str(tmp_path))
    assert result.exit_code == 0, result.output
    lines = (tmp_path / "history.txt").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "# seed=3"
    assert len(lines) == 26
    assert lines[1].startswith("1;")


def test_train_from_a_saved_history(tmp_path):
    invoke("generate-history", "--seed", "3", "--set", "n_history=50", "--out-dir", str(tmp_path))
    result = invoke("train", "--history", str(tmp_path / "history.txt"), "--out-dir", str(tmp_path / "trained"))
    assert result.exit_code == 0, result.output
    rules = pd.read_csv(tmp_path / "trained" / "rules.csv", sep=";")
    assert list(rules.columns) == ["head", "tail", "support", "confidence"]
    assert (tmp_path / "trained" / "tm.csv").exists()


def test_replications_are_merged(tmp_path):
    result = invoke("drops", "--seed", "2", *SMALL, "--set", "replications=2", "--out-dir", str(tmp_path))
    assert result.exit_code == 0, result.output
    frame = pd.read_csv(tmp_path / "replications_drops.csv")
    assert set(frame["seed"].astype(str)) == {"2", "3", "mean"}


def test_unknown_config_key_exits_with_one(tmp_path):
    result = invoke("accuracy", "--set", "bogus=1", "--out-dir", str(tmp_path))
    assert result.exit_code == 1


def test_malformed_override_exits_with_one(tmp_path):
    result = invoke("accuracy", "--set", "n_test", "--out-dir", str(tmp_path))
    assert result.exit_code == 1


def test_bad_history_exits_with_two(tmp_path):
    history = tmp_path / "history.txt"
    history.write_text("1;0(0)->garbage\n", encoding="utf-8")
    result = invoke("accuracy", "--history", str(history), *SMALL, "--out-dir", str(tmp_path / "out"))
    assert result.exit_code == 2


def test_unwritable_out_dir_exits_with_two(tmp_path):
    blocker = tmp_path / "results.txt"
    blocker.write_text("not a directory\n", encoding="utf-8")
    result = invoke("generate-history", "--set", "n_history=5", "--out-dir", str(blocker / "out"))
    assert result.exit_code == 2
    assert isinstance(result.exception, SystemExit)


def test_config_file_is_read(tmp_path):
    config = tmp_path / "config.yaml"
    config.write_text("seed: 9\nn_history: 30\n", encoding="utf-8")
    result = invoke("generate-history", "--config", str(config), "--out-dir", str(tmp_path))
    assert result.exit_code == 0, result.output
    assert (tmp_path / "history.txt").read_text(encoding="utf-8").startswith("# seed=9\n")
