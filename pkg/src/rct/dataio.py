"""CSV ingestion: object_id,timestamp,x,y rows into validated trajectories."""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Union

from .index import Trajectory


class DataError(Exception):
    """Malformed input data; `line` is the offending 1-based CSV line when known."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


def _parse_rows(reader) -> list[tuple[int, int, int, int, int]]:
    rows = []
    for line_no, raw in enumerate(reader, start=1):
        if not raw or (len(raw) == 1 and not raw[0].strip()):
            continue
        if len(raw) != 4:
            if line_no == 1:
                raise DataError(f"expected 4 fields object_id,timestamp,x,y, got {len(raw)}", line_no)
            raise DataError(f"expected 4 fields, got {len(raw)}", line_no)
        try:
            oid, t, x, y = (int(f) for f in raw)
        except ValueError:
            if line_no == 1:  # tolerate a header row
                continue
            raise DataError(f"non-integer field in {raw!r}", line_no) from None
        if oid < 0:
            raise DataError(f"negative object id {oid}", line_no)
        if t < 0:
            raise DataError(f"negative timestamp {t}", line_no)
        if x < 0 or y < 0:
            raise DataError(f"negative coordinate in ({x}, {y})", line_no)
        rows.append((oid, t, x, y, line_no))
    return rows


def read_trajectories(source: Union[str, Path, io.TextIOBase]) -> list[Trajectory]:
    """Read and validate trajectories from a CSV path or open text file.

    Rows may arrive unsorted and with an optional header.  Per object the
    timestamps must be consecutive; gaps and duplicate (id, timestamp)
    pairs are rejected with the offending line.
    """
    if isinstance(source, (str, Path)):
        with open(source, newline="") as fh:
            rows = _parse_rows(csv.reader(fh))
    else:
        rows = _parse_rows(csv.reader(source))
    if not rows:
        raise DataError("no data rows")
    rows.sort(key=lambda r: (r[0], r[1]))
    trajectories: list[Trajectory] = []
    cur_id = None
    cur_start = 0
    cur_positions: list[tuple[int, int]] = []
    prev_t = 0
    for oid, t, x, y, line_no in rows:
        if oid != cur_id:
            if cur_id is not None:
                trajectories.append(Trajectory(cur_id, cur_start, cur_positions))
            cur_id, cur_start, cur_positions, prev_t = oid, t, [(x, y)], t
            continue
        if t == prev_t:
            raise DataError(f"duplicate (id, timestamp) = ({oid}, {t})", line_no)
        if t != prev_t + 1:
            raise DataError(
                f"object {oid}: timestamp gap between {prev_t} and {t}", line_no
            )
        cur_positions.append((x, y))
        prev_t = t
    trajectories.append(Trajectory(cur_id, cur_start, cur_positions))
    return trajectories
