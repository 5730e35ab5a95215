import io

import numpy as np
import pytest
from factories import TOP_ROW, make_history, make_path

from pmms.core.config import MobilityConfig
from pmms.core.exceptions import HistoryParseException, PathValidationException, ReportIOException
from pmms.mobility.generator import generate_history
from pmms.mobility.history import format_path, load_history, parse_path_line, save_history
from pmms.models.domain import PathHistory


def test_format_path():
    assert format_path(make_path(1, TOP_ROW)) == "1;0(0)->1(1)->2(2)->3(3)"


def test_literal_line_round_trip(topo):
    line = "1;6(7)->0(0)->1(1)"
    path = parse_path_line(line, topo)
    assert path.aps == (6, 0, 1)
    assert path.regions == (7, 0, 1)
    assert format_path(path) == line


def test_empty_history_round_trip(topo):
    buffer = io.StringIO()
    save_history(PathHistory(paths=(), seed=4), buffer)
    assert buffer.getvalue() == "# seed=4\n"

    loaded = load_history(io.StringIO(buffer.getvalue()), topo)
    assert len(loaded) == 0
    assert loaded.seed == 4
    assert len(load_history(io.StringIO(""), topo)) == 0


def test_round_trip_through_a_stream(topo):
    history = generate_history(30, topo, MobilityConfig(), np.random.default_rng(2), seed=2)
    buffer = io.StringIO()
    save_history(history, buffer)

    text = buffer.getvalue()
    assert text.startswith("# seed=2\n")
    assert text.count("\n") == 31

    loaded = load_history(io.StringIO(text), topo)
    assert loaded == history
    assert loaded.seed == 2


def test_round_trip_through_a_file(tmp_path, topo):
    history = make_history(TOP_ROW, [(6, 14), (7, 15)])
    target = tmp_path / "history.txt"
    save_history(history, target)
    assert target.read_text(encoding="utf-8") == "1;0(0)->1(1)->2(2)->3(3)\n2;6(14)->7(15)\n"
    assert load_history(target, topo) == history


def test_blank_lines_and_comments_are_skipped(topo):
    text = "\n# a comment\n1;0(0)->1(1)\n\n   \n# seed=17\n2;1(1)->2(2)\n"
    loaded = load_history(io.StringIO(text), topo)
    assert [path.id for path in loaded] == [1, 2]
    assert loaded.seed == 17


@pytest.mark.parametrize(
    "line, fragment",
    [
        ("0(0)->1(1)", "missing ';'"),
        ("x;0(0)->1(1)", "invalid path id"),
        ("1;0(0)->1[1]", "invalid step token"),
        ("1;0(0)->", "invalid step token"),
    ],
)
def test_malformed_lines_report_their_line_number(topo, line, fragment):
    text = f"1;0(0)->1(1)\n\n{line}\n"
    with pytest.raises(HistoryParseException, match=fragment) as info:
        load_history(io.StringIO(text), topo)
    assert info.value.line_number == 3
    assert str(info.value).startswith("line 3: ")


def test_invalid_paths_are_prefixed_with_their_line(topo):
    with pytest.raises(PathValidationException, match=r"^line 2: .*non-adjacent AP"):
        load_history(io.StringIO("1;0(0)->1(1)\n2;0(0)->2(2)\n"), topo)


def test_parse_without_line_number(topo):
    with pytest.raises(PathValidationException) as info:
        parse_path_line("5;0(0)->1(0)", topo)
    assert not str(info.value).startswith("line")
    assert parse_path_line("5;0(0)->1(1)", topo) == make_path(5, [(0, 0), (1, 1)])


def test_missing_file_is_an_io_error(tmp_path, topo):
    with pytest.raises(ReportIOException) as info:
        load_history(tmp_path / "nope.txt", topo)
    assert info.value.path.endswith("nope.txt")
