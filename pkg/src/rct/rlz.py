"""LZ77 parsing against a fixed reference, and the per-trajectory log."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .bitvec import BitVector
from .reference import Reference
from .rmq import MAX, MIN, RangeExtremumIndex


@dataclass(frozen=True)
class Phrase:
    """One copied segment: `start` is 1-based in the reference, `length` >= 1."""

    start: int
    length: int


def suffix_array(seq: Sequence) -> list[int]:
    """Suffix array by prefix doubling; symbols only need a total order."""
    n = len(seq)
    if n == 0:
        return []
    order = {s: i for i, s in enumerate(sorted(set(seq)))}
    rank = [order[s] for s in seq]
    sa = list(range(n))
    span = 1
    while True:
        key = lambda i: (rank[i], rank[i + span] if i + span < n else -1)
        sa.sort(key=key)
        fresh = [0] * n
        for t in range(1, n):
            fresh[sa[t]] = fresh[sa[t - 1]] + (key(sa[t]) != key(sa[t - 1]))
        rank = fresh
        if rank[sa[-1]] == n - 1:
            return sa
        span *= 2


class ReferenceMatcher:
    """Longest-prefix searcher over a fixed sequence, for repeated parsing.

    Holds a suffix array plus a range-minimum table over it so that the
    smallest reference position among equal-length matches comes out in
    O(1) (deterministic tie-breaking).
    """

    def __init__(self, seq: Sequence):
        self._seq = list(seq)
        self._sa = suffix_array(self._seq)
        self._min_pos = RangeExtremumIndex(self._sa, MIN) if self._sa else None
        self._alphabet = set(self._seq)

    def __len__(self) -> int:
        return len(self._seq)

    def _narrow(self, lo: int, hi: int, offset: int, symbol) -> tuple[int, int]:
        """Sub-range of sa[lo:hi] whose suffixes continue with `symbol` at `offset`."""
        sa, seq = self._sa, self._seq
        m = len(seq)
        if sa[lo] + offset == m:  # the one suffix that ends here sorts first
            lo += 1
            if lo >= hi:
                return lo, lo
        a, b = lo, hi
        while a < b:
            mid = (a + b) // 2
            if seq[sa[mid] + offset] < symbol:
                a = mid + 1
            else:
                b = mid
        first = a
        b = hi
        while a < b:
            mid = (a + b) // 2
            if seq[sa[mid] + offset] <= symbol:
                a = mid + 1
            else:
                b = mid
        return first, a

    def parse(self, source: Sequence) -> list[Phrase]:
        """Greedy leftmost-longest factorization of `source` against the reference.

        Every phrase is the longest prefix of the remaining source occurring
        anywhere in the reference; ties go to the smallest start position.
        """
        phrases: list[Phrase] = []
        n = len(source)
        q = 0
        while q < n:
            if source[q] not in self._alphabet:
                raise ValueError(
                    f"symbol {source[q]!r} at position {q} does not occur in the reference"
                )
            lo, hi = 0, len(self._sa)
            length = 0
            while q + length < n:
                nlo, nhi = self._narrow(lo, hi, length, source[q + length])
                if nlo >= nhi:
                    break
                lo, hi, length = nlo, nhi, length + 1
            start = self._sa[self._min_pos.query(lo + 1, hi) - 1] + 1
            phrases.append(Phrase(start, length))
            q += length
        return phrases


def decompress(phrases: Sequence[Phrase], seq: Sequence) -> list:
    """Concatenate the reference segments the phrases point at."""
    m = len(seq)
    out: list = []
    for ph in phrases:
        if ph.length < 1 or ph.start < 1 or ph.start + ph.length - 1 > m:
            raise ValueError(f"phrase {ph} exceeds reference of length {m}")
        out.extend(seq[ph.start - 1 : ph.start - 1 + ph.length])
    return out


class TrajectoryLog:
    """RLZ encoding of one object's movements plus its query overlays.

    `phrase_marks` has a 1 at the first movement of every phrase;
    `prev_positions[j]` is the absolute position just before phrase j+1
    starts; the four extrema arrays bound the absolute positions reached
    during each phrase.
    """

    __slots__ = (
        "object_id",
        "start_time",
        "start_pos",
        "phrase_starts",
        "phrase_marks",
        "prev_positions",
        "x_mins",
        "x_maxs",
        "y_mins",
        "y_maxs",
        "_x_min_idx",
        "_x_max_idx",
        "_y_min_idx",
        "_y_max_idx",
    )

    def __init__(
        self,
        object_id: int,
        start_time: int,
        start_pos: tuple[int, int],
        phrase_starts: list[int],
        phrase_marks: BitVector,
        prev_positions: list[tuple[int, int]],
        x_mins: list[int],
        x_maxs: list[int],
        y_mins: list[int],
        y_maxs: list[int],
    ):
        self.object_id = object_id
        self.start_time = start_time
        self.start_pos = start_pos
        self.phrase_starts = phrase_starts
        self.phrase_marks = phrase_marks
        self.prev_positions = prev_positions
        self.x_mins = x_mins
        self.x_maxs = x_maxs
        self.y_mins = y_mins
        self.y_maxs = y_maxs
        build = lambda vals, mode: RangeExtremumIndex(vals, mode) if vals else None
        self._x_min_idx = build(x_mins, MIN)
        self._x_max_idx = build(x_maxs, MAX)
        self._y_min_idx = build(y_mins, MIN)
        self._y_max_idx = build(y_maxs, MAX)

    @property
    def move_count(self) -> int:
        return len(self.phrase_marks)

    @property
    def phrase_count(self) -> int:
        return len(self.phrase_starts)

    @property
    def end_time(self) -> int:
        return self.start_time + self.move_count

    def phrase_of(self, offset: int) -> int:
        """1-based phrase index containing movement `offset`."""
        return self.phrase_marks.rank1(offset)

    def phrase_first(self, j: int) -> int:
        return self.phrase_marks.select1(j)

    def phrase_last(self, j: int) -> int:
        if j == self.phrase_count:
            return self.move_count
        return self.phrase_marks.select1(j + 1) - 1

    def position_at(self, reference: Reference, offset: int) -> tuple[int, int]:
        """Absolute position after `offset` movements, 0 <= offset <= move_count."""
        if offset == 0:
            return self.start_pos
        j = self.phrase_of(offset)
        within = offset - self.phrase_first(j)
        start = self.phrase_starts[j - 1]
        dx, dy = reference.movement(start - 1, start + within)
        px, py = self.prev_positions[j - 1]
        return (px + dx, py + dy)

    def phrase_box(self, ws: int, we: int) -> tuple[int, int, int, int]:
        """Bounding box of all positions reached during phrases ws..we (1-based)."""
        return (
            self.x_mins[self._x_min_idx.query(ws, we) - 1],
            self.y_mins[self._y_min_idx.query(ws, we) - 1],
            self.x_maxs[self._x_max_idx.query(ws, we) - 1],
            self.y_maxs[self._y_max_idx.query(ws, we) - 1],
        )


def build_log(
    object_id: int,
    start_time: int,
    positions: Sequence[tuple[int, int]],
    reference: Reference,
    matcher: Optional[ReferenceMatcher] = None,
) -> TrajectoryLog:
    """Parse one trajectory's movements and assemble its log.

    `positions` are the absolute positions at consecutive timestamps
    starting at `start_time`.  `matcher` must have been built over the
    reference's symbol ids; it is rebuilt here when omitted.
    """
    if not positions:
        raise ValueError(f"object {object_id}: empty trajectory")
    if matcher is None:
        matcher = ReferenceMatcher(reference.ids)
    moves = []
    for (x0, y0), (x1, y1) in zip(positions, positions[1:]):
        moves.append(reference.symbol_id((x1 - x0, y1 - y0)))
    phrases = matcher.parse(moves)
    marks = [0] * len(moves)
    starts: list[int] = []
    prevs: list[tuple[int, int]] = []
    x_mins: list[int] = []
    x_maxs: list[int] = []
    y_mins: list[int] = []
    y_maxs: list[int] = []
    at = 0
    for ph in phrases:
        marks[at] = 1
        starts.append(ph.start)
        prevs.append(positions[at])
        covered = positions[at + 1 : at + ph.length + 1]
        xs = [x for x, _ in covered]
        ys = [y for _, y in covered]
        x_mins.append(min(xs))
        x_maxs.append(max(xs))
        y_mins.append(min(ys))
        y_maxs.append(max(ys))
        at += ph.length
    return TrajectoryLog(
        object_id,
        start_time,
        tuple(positions[0]),
        starts,
        BitVector(marks),
        prevs,
        x_mins,
        x_maxs,
        y_mins,
        y_maxs,
    )
