import re
from pathlib import Path
from typing import Iterable, List, Optional, TextIO, Union

from loguru import logger

from ..core.exceptions import HistoryParseException, PathValidationException, ReportIOException
from ..models.domain import MobilePath, PathHistory, PathStep
from ..topology.grid import GridTopology, build_grid
from .generator import validate_path

_TOKEN = re.compile(r"^(\d+)\((\d+)\)$")
_SEED_HEADER = re.compile(r"^#\s*seed\s*=\s*(-?\d+)\s*$")

Sink = Union[str, Path, TextIO]


def format_path(path: MobilePath) -> str:
    """`id;ap(region)->ap(region)->...`"""
    return f"{path.id};" + "->".join(step.token() for step in path.steps)


def parse_path_line(line: str, topo: GridTopology, line_number: Optional[int] = None) -> MobilePath:
    """
    Parse one history line.

    Raises:
        HistoryParseException: Malformed line
        PathValidationException: AP/region incidence or adjacency broken
    """
    if ";" not in line:
        raise HistoryParseException(f"missing ';' in {line!r}", line_number)
    raw_id, raw_steps = line.split(";", 1)
    try:
        path_id = int(raw_id)
    except ValueError:
        raise HistoryParseException(f"invalid path id {raw_id!r}", line_number)

    steps = []
    for token in raw_steps.split("->"):
        match = _TOKEN.match(token)
        if match is None:
            raise HistoryParseException(f"invalid step token {token!r}", line_number)
        steps.append(PathStep(ap=int(match.group(1)), region=int(match.group(2))))

    path = MobilePath(id=path_id, steps=tuple(steps))
    try:
        validate_path(path, topo)
    except PathValidationException as e:
        where = f"line {line_number}: " if line_number is not None else ""
        raise PathValidationException(f"{where}{e}") from e
    return path


def _write_lines(lines: Iterable[str], sink: Sink) -> None:
    if isinstance(sink, (str, Path)):
        try:
            with open(sink, "w", encoding="utf-8", newline="\n") as f:
                f.writelines(lines)
        except OSError as e:
            raise ReportIOException(str(e), str(sink)) from e
    else:
        sink.writelines(lines)


def save_history(history: PathHistory, sink: Sink) -> None:
    """
    Write a history, one path per line. A `# seed=<n>` header is written when the seed is known.
    """
    lines: List[str] = []
    if history.seed is not None:
        lines.append(f"# seed={history.seed}\n")
    lines.extend(f"{format_path(path)}\n" for path in history.paths)
    _write_lines(lines, sink)
    logger.info(f"Saved history with {len(history)} paths")


def load_history(source: Sink, topo: Optional[GridTopology] = None) -> PathHistory:
    """
    Read a history written by save_history. Blank lines and `#` comments are skipped.

    Args:
        source: Path or text stream
        topo: Topology to validate against (default 5x5 grid)

    Returns:
        PathHistory
    """
    topo = topo or build_grid()
    if isinstance(source, (str, Path)):
        try:
            with open(source, "r", encoding="utf-8") as f:
                lines = f.read().splitlines()
        except OSError as e:
            raise ReportIOException(str(e), str(source)) from e
    else:
        lines = source.read().splitlines()

    seed = None
    paths = []
    for line_number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            header = _SEED_HEADER.match(line)
            if header:
                seed = int(header.group(1))
            continue
        paths.append(parse_path_line(line, topo, line_number))

    logger.info(f"Loaded history with {len(paths)} paths")
    return PathHistory(paths=tuple(paths), seed=seed)
