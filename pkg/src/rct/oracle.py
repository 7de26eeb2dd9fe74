"""Brute-force ground truth over the raw trajectories; single pass, no tricks."""

from __future__ import annotations

from typing import Iterable, Optional

from .index import Trajectory, as_region


class RawStore:
    """Uncompressed trajectory store answering every query by direct scan."""

    def __init__(self, trajectories: Iterable[Trajectory]):
        self._trajs: dict[int, Trajectory] = {}
        for tr in trajectories:
            if tr.object_id in self._trajs:
                raise ValueError(f"duplicate object id {tr.object_id}")
            self._trajs[tr.object_id] = tr

    def __len__(self) -> int:
        return len(self._trajs)

    def _get(self, object_id: int) -> Trajectory:
        try:
            return self._trajs[object_id]
        except KeyError:
            raise KeyError(f"unknown object id {object_id}") from None

    def search_object(self, object_id: int, t: int) -> Optional[tuple[int, int]]:
        tr = self._get(object_id)
        if not tr.start_time <= t <= tr.end_time:
            return None
        return tr.positions[t - tr.start_time]

    def trajectory(self, object_id: int, t_start: int, t_end: int) -> list[tuple[int, int, int]]:
        if t_start > t_end:
            raise ValueError(f"invalid time range [{t_start}, {t_end}]")
        tr = self._get(object_id)
        a = max(t_start, tr.start_time)
        b = min(t_end, tr.end_time)
        return [(t, *tr.positions[t - tr.start_time]) for t in range(a, b + 1)]

    def time_slice(self, region, t: int) -> list[tuple[int, int, int]]:
        region = as_region(region)
        hits = []
        for tr in self._trajs.values():
            if tr.start_time <= t <= tr.end_time:
                x, y = tr.positions[t - tr.start_time]
                if region.contains(x, y):
                    hits.append((tr.object_id, x, y))
        hits.sort()
        return hits

    def time_interval(self, region, t_start: int, t_end: int) -> list[int]:
        region = as_region(region)
        if t_start > t_end:
            raise ValueError(f"invalid time range [{t_start}, {t_end}]")
        ids = []
        for tr in self._trajs.values():
            a = max(t_start, tr.start_time)
            b = min(t_end, tr.end_time)
            for t in range(a, b + 1):
                if region.contains(*tr.positions[t - tr.start_time]):
                    ids.append(tr.object_id)
                    break
        ids.sort()
        return ids
