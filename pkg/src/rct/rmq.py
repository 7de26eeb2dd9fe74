"""Range-minimum / range-maximum queries returning argmin/argmax positions."""

from __future__ import annotations

from typing import Sequence

MIN = "min"
MAX = "max"


class RangeExtremumIndex:
    """Sparse table answering "index of the extremum in values[i..j]" in O(1).

    Queries are 1-based and inclusive; ties break toward the smallest index.
    The value array is kept so queries need no outside state.
    """

    __slots__ = ("values", "mode", "_table")

    def __init__(self, values: Sequence[int], mode: str):
        if mode not in (MIN, MAX):
            raise ValueError(f"mode must be {MIN!r} or {MAX!r}, got {mode!r}")
        if len(values) == 0:
            raise ValueError("cannot index an empty array")
        self.values = list(values)
        self.mode = mode
        n = len(self.values)
        levels = (n).bit_length()
        table = [list(range(n))]
        vals = self.values
        prefer_left = (lambda a, b: vals[a] <= vals[b]) if mode == MIN else (
            lambda a, b: vals[a] >= vals[b]
        )
        for depth in range(1, levels):
            half = 1 << (depth - 1)
            prev = table[-1]
            row = []
            for i in range(n - (1 << depth) + 1):
                a, b = prev[i], prev[i + half]
                row.append(a if prefer_left(a, b) else b)
            table.append(row)
        self._table = table

    def __len__(self) -> int:
        return len(self.values)

    def query(self, i: int, j: int) -> int:
        """1-based index of the leftmost extremum of values[i..j]."""
        n = len(self.values)
        if not 1 <= i <= j <= n:
            raise ValueError(f"invalid range [{i}, {j}] for length {n}")
        a, b = i - 1, j - 1
        depth = (b - a + 1).bit_length() - 1
        row = self._table[depth]
        left, right = row[a], row[b - (1 << depth) + 1]
        vals = self.values
        if self.mode == MIN:
            keep_left = vals[left] <= vals[right]
        else:
            keep_left = vals[left] >= vals[right]
        return (left if keep_left else right) + 1
