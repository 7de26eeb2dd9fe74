"""Artificial movement reference with constant-time displacement and MBB queries."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence

from .bitvec import BitVector
from .rmq import MAX, MIN, RangeExtremumIndex

MovementSymbol = tuple[int, int]  # (dx, dy) displacement of one timestep
MovementSequence = Sequence[MovementSymbol]


class RelativeMBB(NamedTuple):
    """Bounding box of a reference segment, relative to the pre-segment position."""

    x_min: int
    y_min: int
    x_max: int
    y_max: int


class ExtremaIndex:
    """Sampled local extrema of one cumulative coordinate of the reference.

    `marks` has a 1 at every interior step where the coordinate turns through
    a valley (MIN mode) or a peak (MAX mode); `extremum` ranks the coordinate
    values at the marked steps.  Boundary steps are never marked: range
    queries always compare both boundary values explicitly.
    """

    __slots__ = ("mode", "marks", "extremum")

    def __init__(self, cumulative: Sequence[int], mode: str):
        steps = len(cumulative) - 1
        bits = [0] * steps
        values = []
        if mode == MIN:
            turns = lambda a, b, c: b < a and b <= c
        else:
            turns = lambda a, b, c: b > a and b >= c
        for t in range(2, steps):
            if turns(cumulative[t - 1], cumulative[t], cumulative[t + 1]):
                bits[t - 1] = 1
                values.append(cumulative[t])
        self.mode = mode
        self.marks = BitVector(bits)
        self.extremum: Optional[RangeExtremumIndex] = (
            RangeExtremumIndex(values, mode) if values else None
        )

    def candidate_step(self, i: int, j: int) -> Optional[int]:
        """A step in [i..j] holding the extremum among marked steps, if any."""
        first = self.marks.rank1(i - 1) + 1
        last = self.marks.rank1(j)
        if first > last or self.extremum is None:
            return None
        return self.marks.select1(self.extremum.query(first, last))


def _unary_append(bits: list[int], magnitude: int) -> None:
    bits.extend([0] * magnitude)
    bits.append(1)


class Reference:
    """Artificial movement sequence plus the overlays answering movement and mbb.

    Per-step displacements are unary-coded into four bitmaps, one per axis
    and sign; each bitmap carries exactly one terminating 1 per step, so the
    cumulative displacement up to step t falls out of a single select each.
    """

    __slots__ = (
        "alphabet",
        "ids",
        "x_pos",
        "x_neg",
        "y_pos",
        "y_neg",
        "x_min_idx",
        "x_max_idx",
        "y_min_idx",
        "y_max_idx",
        "_sym_id",
    )

    def __init__(self, symbols: MovementSequence):
        symbols = list(symbols)
        self.alphabet: list[MovementSymbol] = sorted(set(symbols))
        self._sym_id = {s: i for i, s in enumerate(self.alphabet)}
        self.ids = [self._sym_id[s] for s in symbols]
        xp: list[int] = []
        xn: list[int] = []
        yp: list[int] = []
        yn: list[int] = []
        cum_x = [0]
        cum_y = [0]
        for dx, dy in symbols:
            _unary_append(xp, max(dx, 0))
            _unary_append(xn, max(-dx, 0))
            _unary_append(yp, max(dy, 0))
            _unary_append(yn, max(-dy, 0))
            cum_x.append(cum_x[-1] + dx)
            cum_y.append(cum_y[-1] + dy)
        self.x_pos = BitVector(xp)
        self.x_neg = BitVector(xn)
        self.y_pos = BitVector(yp)
        self.y_neg = BitVector(yn)
        self.x_min_idx = ExtremaIndex(cum_x, MIN)
        self.x_max_idx = ExtremaIndex(cum_x, MAX)
        self.y_min_idx = ExtremaIndex(cum_y, MIN)
        self.y_max_idx = ExtremaIndex(cum_y, MAX)

    @classmethod
    def from_parts(cls, alphabet: list[MovementSymbol], ids: list[int]) -> "Reference":
        return cls([alphabet[i] for i in ids])

    def __len__(self) -> int:
        return len(self.ids)

    def symbol_id(self, symbol: MovementSymbol) -> int:
        try:
            return self._sym_id[symbol]
        except KeyError:
            raise ValueError(f"movement {symbol!r} does not occur in the reference") from None

    def step(self, t: int) -> MovementSymbol:
        """Displacement of reference step t, 1-based."""
        return self.alphabet[self.ids[t - 1]]

    @staticmethod
    def _delta(bitmap: BitVector, t: int) -> int:
        """Zeros before the t-th one: total magnitude of the first t steps."""
        return bitmap.select1(t) - t if t else 0

    def _axis_delta(self, pos: BitVector, neg: BitVector, i: int, j: int) -> int:
        return (
            self._delta(pos, j)
            - self._delta(pos, i)
            - self._delta(neg, j)
            + self._delta(neg, i)
        )

    def movement(self, i: int, j: int) -> tuple[int, int]:
        """Cumulative displacement over reference steps i+1..j, 0 <= i <= j <= m."""
        if not 0 <= i <= j <= len(self.ids):
            raise ValueError(f"invalid step range ({i}, {j}) for reference of length {len(self.ids)}")
        if i == j:
            return (0, 0)
        return (
            self._axis_delta(self.x_pos, self.x_neg, i, j),
            self._axis_delta(self.y_pos, self.y_neg, i, j),
        )

    def mbb(self, i: int, j: int) -> RelativeMBB:
        """Per-axis extrema of movement(i-1, t) over t in [i..j].

        Each bound comes from the two boundary values plus, when the range
        holds a sampled extremum, the single candidate step the extremum
        index nominates.
        """
        if not 1 <= i <= j <= len(self.ids):
            raise ValueError(f"invalid mbb range ({i}, {j}) for reference of length {len(self.ids)}")

        def axis_bound(pos, neg, idx, pick):
            bounds = [
                self._axis_delta(pos, neg, i - 1, i),
                self._axis_delta(pos, neg, i - 1, j),
            ]
            t = idx.candidate_step(i, j)
            if t is not None:
                bounds.append(self._axis_delta(pos, neg, i - 1, t))
            return pick(bounds)

        return RelativeMBB(
            x_min=axis_bound(self.x_pos, self.x_neg, self.x_min_idx, min),
            y_min=axis_bound(self.y_pos, self.y_neg, self.y_min_idx, min),
            x_max=axis_bound(self.x_pos, self.x_neg, self.x_max_idx, max),
            y_max=axis_bound(self.y_pos, self.y_neg, self.y_max_idx, max),
        )


def build_reference(
    dataset: Iterable[MovementSequence],
    ref_fraction: Fraction = Fraction(1, 10),
    block_length: int = 8,
) -> Reference:
    """Assemble the artificial reference from frequent fixed-length blocks.

    Every movement sequence is cut into blocks of `block_length` steps
    (trailing remainder included).  Blocks are chosen by descending
    frequency until the reference reaches `ref_fraction` of the total
    movement count, then laid out in first-occurrence order so that runs
    of popular blocks stay contiguous.  Finally any dataset symbol still
    missing is appended, so every sequence can be parsed.
    """
    sequences = list(dataset)
    if not sequences:
        raise ValueError("cannot build a reference from an empty dataset")
    if block_length < 1:
        raise ValueError("block_length must be positive")
    counts: dict[tuple, int] = {}
    first_seen: dict[tuple, int] = {}
    alphabet: set[MovementSymbol] = set()
    total = 0
    for seq in sequences:
        total += len(seq)
        alphabet.update(seq)
        for off in range(0, len(seq), block_length):
            block = tuple(seq[off : off + block_length])
            if block not in counts:
                counts[block] = 0
                first_seen[block] = len(first_seen)
            counts[block] += 1
    num, den = ref_fraction.numerator, ref_fraction.denominator
    target = -(-total * num // den)  # ceil
    chosen: list[tuple] = []
    length = 0
    for block in sorted(counts, key=lambda b: -counts[b]):
        if length >= target:
            break
        chosen.append(block)
        length += len(block)
    chosen.sort(key=first_seen.__getitem__)
    symbols: list[MovementSymbol] = [s for block in chosen for s in block]
    present = set(symbols)
    symbols.extend(s for s in sorted(alphabet - present))
    return Reference(symbols)
