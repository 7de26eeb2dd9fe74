"""Succinct k2-tree snapshot of object positions at one timestamp."""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

from .bitvec import BitVector


class Snapshot:
    """Spatial record of every active object at one timestamp.

    The occupancy matrix is a k2-tree: `tree_bits` holds the internal
    levels in breadth-first order, `leaf_bits` the single-cell level.
    Object ids sit in `cell_ids`, grouped per occupied cell in traversal
    (Morton) order; `run_starts` has a 1 at the first id of each cell run.
    """

    __slots__ = ("timestamp", "side", "k", "tree_bits", "leaf_bits", "run_starts", "cell_ids")

    def __init__(
        self,
        timestamp: int,
        side: int,
        k: int,
        tree_bits: BitVector,
        leaf_bits: BitVector,
        run_starts: BitVector,
        cell_ids: Sequence[int],
    ):
        self.timestamp = timestamp
        self.side = side
        self.k = k
        self.tree_bits = tree_bits
        self.leaf_bits = leaf_bits
        self.run_starts = run_starts
        self.cell_ids = list(cell_ids)

    def _ids_at(self, ordinal: int) -> list[int]:
        """Ids of the `ordinal`-th occupied cell (1-based, traversal order)."""
        start = self.run_starts.select1(ordinal) - 1
        if ordinal < self.run_starts.ones:
            end = self.run_starts.select1(ordinal + 1) - 1
        else:
            end = len(self.cell_ids)
        return self.cell_ids[start:end]

    def report_region(self, region) -> set[tuple[int, int, int]]:
        """All (object_id, x, y) with x1 <= x <= x2 and y1 <= y <= y2."""
        x1, y1, x2, y2 = region
        if x1 > x2 or y1 > y2:
            raise ValueError(f"malformed region {region!r}")
        x1, y1 = max(x1, 0), max(y1, 0)
        x2, y2 = min(x2, self.side - 1), min(y2, self.side - 1)
        out: set[tuple[int, int, int]] = set()
        if x1 > x2 or y1 > y2 or len(self.leaf_bits) == 0:
            return out
        k = self.k
        n_tree = len(self.tree_bits)
        # stack entries: (first child bit position, cell origin, node size)
        stack = [(0, 0, 0, self.side)]
        while stack:
            base, ox, oy, size = stack.pop()
            sub = size // k
            for r in range(k):
                cy = oy + r * sub
                if cy > y2 or cy + sub - 1 < y1:
                    continue
                for c in range(k):
                    cx = ox + c * sub
                    if cx > x2 or cx + sub - 1 < x1:
                        continue
                    q = base + r * k + c
                    if q < n_tree:
                        if self.tree_bits.access(q + 1):
                            stack.append((self.tree_bits.rank1(q + 1) * k * k, cx, cy, sub))
                    else:
                        leaf = q - n_tree
                        if self.leaf_bits.access(leaf + 1):
                            ordinal = self.leaf_bits.rank1(leaf + 1)
                            for oid in self._ids_at(ordinal):
                                out.add((oid, cx, cy))
        return out


def build_snapshot(
    points: Iterable[tuple[int, int, int]],
    grid: tuple[int, int],
    k: int = 2,
    timestamp: int = 0,
) -> Snapshot:
    """Build a snapshot from (object_id, x, y) points on [0,max_x] x [0,max_y].

    The grid side is padded to the next power of k.  Several objects may
    share a cell; object ids must be unique within the snapshot.
    """
    max_x, max_y = grid
    if k < 2:
        raise ValueError("k must be at least 2")
    pts = list(points)
    seen_ids = set()
    for oid, x, y in pts:
        if not (0 <= x <= max_x and 0 <= y <= max_y):
            raise ValueError(f"point ({x}, {y}) of object {oid} outside grid {grid}")
        if oid in seen_ids:
            raise ValueError(f"duplicate object id {oid} in snapshot")
        seen_ids.add(oid)

    side = k
    while side < max(max_x, max_y) + 1:
        side *= k

    tree_bits: list[int] = []
    leaf_bits: list[int] = []
    run_starts: list[int] = []
    cell_ids: list[int] = []
    queue: deque = deque([(0, 0, side, pts)])
    while queue:
        ox, oy, size, node_pts = queue.popleft()
        sub = size // k
        buckets: list[list[tuple[int, int, int]]] = [[] for _ in range(k * k)]
        for p in node_pts:
            _, x, y = p
            buckets[((y - oy) // sub) * k + ((x - ox) // sub)].append(p)
        for idx, bucket in enumerate(buckets):
            if sub == 1:
                leaf_bits.append(1 if bucket else 0)
                if bucket:
                    ids = sorted(oid for oid, _, _ in bucket)
                    run_starts.extend([1] + [0] * (len(ids) - 1))
                    cell_ids.extend(ids)
            else:
                tree_bits.append(1 if bucket else 0)
                if bucket:
                    r, c = divmod(idx, k)
                    queue.append((ox + c * sub, oy + r * sub, sub, bucket))
    return Snapshot(
        timestamp,
        side,
        k,
        BitVector(tree_bits),
        BitVector(leaf_bits),
        BitVector(run_starts),
        cell_ids,
    )
