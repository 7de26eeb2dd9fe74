"""Synthetic fleets: objects following shared routes with per-step mutation."""

from __future__ import annotations

import random

from .index import Trajectory

_STEPS = [(dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1)]


def _route_deltas(rng: random.Random, steps: int) -> list[tuple[int, int]]:
    """A persistent random walk: mostly keeps its heading, occasionally turns."""
    deltas = []
    heading = rng.choice(_STEPS)
    for _ in range(steps):
        if rng.random() < 0.2:
            heading = rng.choice(_STEPS)
        deltas.append(heading)
    return deltas


def _safe_start(rng: random.Random, deltas, grid_side: int) -> tuple[int, int]:
    """A start from which the route stays on the grid, when one exists."""
    x = y = min_x = max_x = min_y = max_y = 0
    for dx, dy in deltas:
        x += dx
        y += dy
        min_x, max_x = min(min_x, x), max(max_x, x)
        min_y, max_y = min(min_y, y), max(max_y, y)
    lo_x, hi_x = -min_x, grid_side - 1 - max_x
    lo_y, hi_y = -min_y, grid_side - 1 - max_y
    if lo_x > hi_x or lo_y > hi_y:
        return rng.randrange(grid_side), rng.randrange(grid_side)
    return rng.randint(lo_x, hi_x), rng.randint(lo_y, hi_y)


def generate_fleet(
    objects: int,
    steps: int,
    grid_side: int,
    routes: int = 4,
    mutation_rate: float = 0.0,
    seed: int = 0,
) -> list[Trajectory]:
    """Deterministic dataset of route-following objects on a square grid.

    Each object replays route `id % routes`; with probability
    `mutation_rate` a step is replaced by a random one.  Positions are
    clamped to the grid, so near the border the realized movements may
    differ from the route.
    """
    if objects < 0 or steps < 0 or grid_side < 1:
        raise ValueError("objects and steps must be >= 0 and grid >= 1")
    if routes < 1:
        raise ValueError("routes must be >= 1")
    if not 0.0 <= mutation_rate <= 1.0:
        raise ValueError("mutation-rate must be within [0, 1]")
    rng = random.Random(seed)
    route_pool = [_route_deltas(rng, steps) for _ in range(routes)]
    out = []
    for oid in range(objects):
        deltas = route_pool[oid % routes]
        x, y = _safe_start(rng, deltas, grid_side)
        positions = [(x, y)]
        for dx, dy in deltas:
            if mutation_rate and rng.random() < mutation_rate:
                dx, dy = rng.choice(_STEPS)
            x = min(max(x + dx, 0), grid_side - 1)
            y = min(max(y + dy, 0), grid_side - 1)
            positions.append((x, y))
        out.append(Trajectory(oid, 0, positions))
    return out


def to_csv_lines(trajectories) -> "list[str]":
    lines = []
    for tr in trajectories:
        for k, (x, y) in enumerate(tr.positions):
            lines.append(f"{tr.object_id},{tr.start_time + k},{x},{y}")
    return lines
