"""The trajectory index: snapshots + reference + logs, and the four queries."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence, Union

from .k2tree import build_snapshot
from .reference import build_reference
from .rlz import ReferenceMatcher, TrajectoryLog, build_log


class NotFittedError(RuntimeError):
    """A query was issued before fit() or load."""


class Region(NamedTuple):
    """Closed axis-aligned rectangle [x1, x2] x [y1, y2]."""

    x1: int
    y1: int
    x2: int
    y2: int

    def contains(self, x: int, y: int) -> bool:
        return self.x1 <= x <= self.x2 and self.y1 <= y <= self.y2

    def covers(self, box: tuple[int, int, int, int]) -> bool:
        bx1, by1, bx2, by2 = box
        return self.x1 <= bx1 and bx2 <= self.x2 and self.y1 <= by1 and by2 <= self.y2

    def disjoint(self, box: tuple[int, int, int, int]) -> bool:
        bx1, by1, bx2, by2 = box
        return bx2 < self.x1 or self.x2 < bx1 or by2 < self.y1 or self.y2 < by1

    def expanded(self, amount: int, bounds: tuple[int, int]) -> "Region":
        """Grow by `amount` on every side, clamped to [0, max_x] x [0, max_y]."""
        max_x, max_y = bounds
        return Region(
            max(self.x1 - amount, 0),
            max(self.y1 - amount, 0),
            min(self.x2 + amount, max_x),
            min(self.y2 + amount, max_y),
        )


def as_region(value: Union[Region, Sequence[int]]) -> Region:
    """Validate and coerce (x1, y1, x2, y2) into a Region."""
    region = Region(*value)
    if region.x1 > region.x2 or region.y1 > region.y2:
        raise ValueError(f"malformed region {tuple(region)}: need x1 <= x2 and y1 <= y2")
    return region


@dataclass
class Trajectory:
    """Raw positions of one object at consecutive timestamps from start_time."""

    object_id: int
    start_time: int
    positions: list[tuple[int, int]]

    @property
    def end_time(self) -> int:
        return self.start_time + len(self.positions) - 1


# Query descriptions shared by the index and the brute-force oracle.
@dataclass(frozen=True)
class SearchObject:
    object_id: int
    t: int


@dataclass(frozen=True)
class TrajectoryBetween:
    object_id: int
    t_start: int
    t_end: int


@dataclass(frozen=True)
class TimeSlice:
    region: Region
    t: int


@dataclass(frozen=True)
class TimeInterval:
    region: Region
    t_start: int
    t_end: int


Query = Union[SearchObject, TrajectoryBetween, TimeSlice, TimeInterval]


def run_query(engine, query: Query):
    """Dispatch a query description against an index or an oracle store."""
    if isinstance(query, SearchObject):
        return engine.search_object(query.object_id, query.t)
    if isinstance(query, TrajectoryBetween):
        return engine.trajectory(query.object_id, query.t_start, query.t_end)
    if isinstance(query, TimeSlice):
        return engine.time_slice(query.region, query.t)
    if isinstance(query, TimeInterval):
        return engine.time_interval(query.region, query.t_start, query.t_end)
    raise TypeError(f"unsupported query {query!r}")


def _as_fraction(value) -> Fraction:
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


def validate_trajectories(trajectories: Iterable[Trajectory]) -> list[Trajectory]:
    """Check ids, coordinates and shapes before building; returns a list."""
    trajs = list(trajectories)
    if not trajs:
        raise ValueError("cannot build an index from an empty dataset")
    seen: set[int] = set()
    for tr in trajs:
        if tr.object_id in seen:
            raise ValueError(f"duplicate object id {tr.object_id}")
        seen.add(tr.object_id)
        if tr.object_id < 0:
            raise ValueError(f"object id {tr.object_id} must be non-negative")
        if tr.start_time < 0:
            raise ValueError(f"object {tr.object_id}: start time {tr.start_time} is negative")
        if not tr.positions:
            raise ValueError(f"object {tr.object_id}: no positions")
        for k, (x, y) in enumerate(tr.positions):
            if not (isinstance(x, int) and isinstance(y, int)) or x < 0 or y < 0:
                raise ValueError(
                    f"object {tr.object_id} at timestamp {tr.start_time + k}: "
                    f"position ({x}, {y}) off the integer grid"
                )
    return trajs


class RCTIndex:
    """Compressed index over moving-object trajectories.

    Follows the estimator convention: hyperparameters in the constructor,
    `fit(trajectories)` builds the structure and returns self, fitted state
    lives in trailing-underscore attributes.  All four queries are exact.

    Parameters
    ----------
    period : distance `d` between consecutive snapshots.
    k : arity of the snapshot k2-trees.
    ref_fraction : target reference length as a fraction of the total
        movement count (int, float, str or Fraction).
    block_length : block size of the reference construction heuristic.
    """

    def __init__(self, period: int = 32, k: int = 2, ref_fraction="1/10", block_length: int = 8):
        self.period = period
        self.k = k
        self.ref_fraction = ref_fraction
        self.block_length = block_length

    # -- estimator plumbing -------------------------------------------------

    _PARAM_NAMES = ("period", "k", "ref_fraction", "block_length")

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in self._PARAM_NAMES}

    def set_params(self, **params) -> "RCTIndex":
        for name, value in params.items():
            if name not in self._PARAM_NAMES:
                raise ValueError(f"unknown parameter {name!r}")
            setattr(self, name, value)
        return self

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{type(self).__name__}({args})"

    @property
    def is_fitted(self) -> bool:
        return hasattr(self, "logs_")

    def _check_fitted(self) -> None:
        if not self.is_fitted:
            raise NotFittedError("index is not built; call fit() or load an index file")

    # -- building -----------------------------------------------------------

    def fit(self, trajectories: Iterable[Trajectory]) -> "RCTIndex":
        """Build reference, logs, snapshots and appearance lists from raw data."""
        if self.period < 1:
            raise ValueError("period must be at least 1")
        trajs = validate_trajectories(trajectories)
        frac = _as_fraction(self.ref_fraction)
        if frac <= 0:
            raise ValueError("ref_fraction must be positive")

        max_x = max(x for tr in trajs for x, _ in tr.positions)
        max_y = max(y for tr in trajs for _, y in tr.positions)
        speed = 0
        sequences = []
        for tr in trajs:
            seq = [
                (x1 - x0, y1 - y0)
                for (x0, y0), (x1, y1) in zip(tr.positions, tr.positions[1:])
            ]
            for dx, dy in seq:
                speed = max(speed, abs(dx), abs(dy))
            sequences.append(seq)

        reference = build_reference(sequences, frac, self.block_length)
        matcher = ReferenceMatcher(reference.ids)
        logs = {
            tr.object_id: build_log(tr.object_id, tr.start_time, tr.positions, reference, matcher)
            for tr in trajs
        }

        t_max = max(tr.end_time for tr in trajs)
        by_id = {tr.object_id: tr for tr in trajs}
        snapshots = []
        for q in range(t_max // self.period + 1):
            ts = q * self.period
            points = [
                (tr.object_id, *tr.positions[ts - tr.start_time])
                for tr in trajs
                if tr.start_time <= ts <= tr.end_time
            ]
            snapshots.append(build_snapshot(points, (max_x, max_y), self.k, ts))

        appearances: dict[int, list[int]] = {}
        for tr in trajs:
            if tr.start_time % self.period != 0:
                appearances.setdefault(tr.start_time // self.period, []).append(tr.object_id)
        for ids in appearances.values():
            ids.sort()

        self.grid_ = (max_x, max_y)
        self.max_speed_ = speed
        self.t_max_ = t_max
        self.reference_ = reference
        self.logs_ = logs
        self.snapshots_ = snapshots
        self.appearances_ = appearances
        return self

    def _adopt(self, grid, max_speed, t_max, reference, logs, snapshots, appearances) -> None:
        """Install fitted state directly (deserialization path)."""
        self.grid_ = grid
        self.max_speed_ = max_speed
        self.t_max_ = t_max
        self.reference_ = reference
        self.logs_ = logs
        self.snapshots_ = snapshots
        self.appearances_ = appearances

    def stats(self) -> dict:
        self._check_fitted()
        return {
            "objects": len(self.logs_),
            "movements": sum(log.move_count for log in self.logs_.values()),
            "reference_length": len(self.reference_),
            "phrases": sum(log.phrase_count for log in self.logs_.values()),
        }

    # -- queries ------------------------------------------------------------

    def _log(self, object_id: int) -> TrajectoryLog:
        self._check_fitted()
        try:
            return self.logs_[object_id]
        except KeyError:
            raise KeyError(f"unknown object id {object_id}") from None

    def search_object(self, object_id: int, t: int) -> Optional[tuple[int, int]]:
        """Position of the object at timestamp t, or None when inactive."""
        log = self._log(object_id)
        if not log.start_time <= t <= log.end_time:
            return None
        return log.position_at(self.reference_, t - log.start_time)

    def trajectory(self, object_id: int, t_start: int, t_end: int) -> list[tuple[int, int, int]]:
        """(t, x, y) at every instant of [t_start, t_end] the object is active."""
        if t_start > t_end:
            raise ValueError(f"invalid time range [{t_start}, {t_end}]")
        log = self._log(object_id)
        a = max(t_start, log.start_time)
        b = min(t_end, log.end_time)
        if a > b:
            return []
        ref = self.reference_
        x, y = log.position_at(ref, a - log.start_time)
        out = [(a, x, y)]
        first = a - log.start_time + 1
        marks = log.phrase_marks
        j = rs = 0
        for off in range(first, b - log.start_time + 1):
            if off == first:
                j = log.phrase_of(off)
                rs = log.phrase_starts[j - 1] + (off - log.phrase_first(j))
            elif marks.access(off):
                j += 1
                rs = log.phrase_starts[j - 1]
            dx, dy = ref.step(rs)
            x += dx
            y += dy
            rs += 1
            out.append((log.start_time + off, x, y))
        return out

    def _slice_candidates(self, region: Region, t: int) -> set[int]:
        """Ids that could be inside `region` at t: snapshot hits plus mid-period arrivals."""
        if self._off_grid(region):
            return set()
        q = t // self.period
        expanded = region.expanded(self.max_speed_ * (t - q * self.period), self.grid_)
        found = {oid for oid, _, _ in self.snapshots_[q].report_region(expanded)}
        found.update(self.appearances_.get(q, ()))
        return found

    def _off_grid(self, region: Region) -> bool:
        """True when the region misses [0, max_x] x [0, max_y] entirely."""
        max_x, max_y = self.grid_
        return region.x2 < 0 or region.x1 > max_x or region.y2 < 0 or region.y1 > max_y

    def time_slice(self, region, t: int) -> list[tuple[int, int, int]]:
        """All (object_id, x, y) inside `region` at timestamp t, sorted by id."""
        self._check_fitted()
        region = as_region(region)
        if t < 0 or t > self.t_max_ or self._off_grid(region):
            return []
        hits = []
        for oid in self._slice_candidates(region, t):
            pos = self.search_object(oid, t)
            if pos is not None and region.contains(*pos):
                hits.append((oid, *pos))
        hits.sort()
        return hits

    def time_interval(self, region, t_start: int, t_end: int) -> list[int]:
        """Ids of objects inside `region` at any instant of [t_start, t_end], sorted."""
        self._check_fitted()
        region = as_region(region)
        if t_start > t_end:
            raise ValueError(f"invalid time range [{t_start}, {t_end}]")
        a = max(t_start, 0)
        b = min(t_end, self.t_max_)
        if a > b or self._off_grid(region):
            return []
        found: set[int] = set()
        for q in range(a // self.period, b // self.period + 1):
            sub_a = max(a, q * self.period)
            sub_b = min(b, (q + 1) * self.period - 1)
            expanded = region.expanded(self.max_speed_ * (sub_b - q * self.period), self.grid_)
            candidates = {oid for oid, _, _ in self.snapshots_[q].report_region(expanded)}
            candidates.update(self.appearances_.get(q, ()))
            for oid in sorted(candidates):
                if oid in found:
                    continue
                if self._hits_region_during(self.logs_[oid], region, sub_a, sub_b):
                    found.add(oid)
        return sorted(found)

    # -- time-interval candidate verification --------------------------------

    def _hits_region_during(self, log: TrajectoryLog, region: Region, a: int, b: int) -> bool:
        """Whether the object's position enters `region` at some t in [a, b].

        Works on the fully covered phrase range first, recursively halving
        it under MBB pruning; partially covered edge movements fall back to
        binary search over the reference.
        """
        ta = max(a, log.start_time) - log.start_time
        tb = min(b, log.end_time) - log.start_time
        if ta > tb:
            return False
        if ta == 0:
            if region.contains(*log.start_pos):
                return True
            ta = 1
            if ta > tb:
                return False
        # first phrase starting at or after ta; last phrase ending at or before tb
        ws = log.phrase_marks.rank1(ta - 1) + 1
        jb = log.phrase_of(tb)
        we = jb if log.phrase_last(jb) <= tb else jb - 1
        if ws > we:
            return self._scan_movements(log, region, ta, tb)
        t1 = log.phrase_first(ws)
        t2 = log.phrase_last(we)
        if self._check_phrases(log, region, ws, we):
            return True
        if ta < t1 and self._scan_movements(log, region, ta, t1 - 1):
            return True
        return t2 < tb and self._scan_movements(log, region, t2 + 1, tb)

    def _check_phrases(self, log: TrajectoryLog, region: Region, ws: int, we: int) -> bool:
        """Recursive halving over whole phrases using the per-phrase MBB arrays."""
        box = log.phrase_box(ws, we)
        if region.covers(box):
            return True
        if region.disjoint(box):
            return False
        if ws == we:
            return self._scan_movements(log, region, log.phrase_first(ws), log.phrase_last(ws))
        mid = (ws + we) // 2
        return self._check_phrases(log, region, ws, mid) or self._check_phrases(
            log, region, mid + 1, we
        )

    def _scan_movements(self, log: TrajectoryLog, region: Region, lo: int, hi: int) -> bool:
        """Check movement offsets [lo, hi], chunked per phrase, on the reference."""
        j = log.phrase_of(lo)
        while True:
            first = log.phrase_first(j)
            last = log.phrase_last(j)
            u = max(lo, first)
            v = min(hi, last)
            start = log.phrase_starts[j - 1]
            px, py = log.prev_positions[j - 1]
            dx, dy = self.reference_.movement(start - 1, start - 1 + (u - first))
            base = (px + dx, py + dy)
            ri = start + (u - first)
            rj = start + (v - first)
            if self._check_reference(region, base, ri, rj):
                return True
            if last >= hi:
                return False
            j += 1

    def _check_reference(self, region: Region, base: tuple[int, int], ri: int, rj: int) -> bool:
        """Binary search over reference steps [ri, rj]; `base` is the position at step ri-1."""
        rel = self.reference_.mbb(ri, rj)
        bx, by = base
        box = (bx + rel.x_min, by + rel.y_min, bx + rel.x_max, by + rel.y_max)
        if region.covers(box):
            return True
        if region.disjoint(box) or ri == rj:
            # a single step's box is its exact position, so intersection
            # implies containment; reaching here means it missed
            return False
        mid = (ri + rj) // 2
        if self._check_reference(region, base, ri, mid):
            return True
        dx, dy = self.reference_.movement(ri - 1, mid)
        return self._check_reference(region, (bx + dx, by + dy), mid + 1, rj)

    # -- persistence ----------------------------------------------------------

    def save(self, target) -> None:
        from .serialize import save_index

        save_index(self, target)

    @classmethod
    def load(cls, source) -> "RCTIndex":
        from .serialize import load_index

        return load_index(source)
