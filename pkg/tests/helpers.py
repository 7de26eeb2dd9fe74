"""Shared test utilities: random datasets, naive oracles for the succinct parts."""

from __future__ import annotations

import random

from rct import Region, Trajectory


def random_walk(rng: random.Random, steps: int, grid: tuple[int, int], speed: int = 3,
                start=None) -> list[tuple[int, int]]:
    max_x, max_y = grid
    if start is None:
        x, y = rng.randint(0, max_x), rng.randint(0, max_y)
    else:
        x, y = start
    positions = [(x, y)]
    for _ in range(steps):
        x = min(max(x + rng.randint(-speed, speed), 0), max_x)
        y = min(max(y + rng.randint(-speed, speed), 0), max_y)
        positions.append((x, y))
    return positions


def make_dataset(rng: random.Random, max_objects: int = 20, max_duration: int = 500,
                 grid: tuple[int, int] = (1023, 1023), speed: int = 3) -> list[Trajectory]:
    """Random fleet with mixed start offsets, stationary objects and route sharing."""
    n_objects = rng.randint(1, max_objects)
    horizon = rng.randint(2, max_duration)
    shared = random_walk(rng, horizon, grid, speed)
    trajs = []
    for oid in range(n_objects):
        t_s = rng.randint(0, max(horizon - 1, 0)) if rng.random() < 0.5 else 0
        steps = rng.randint(0, horizon - t_s)
        kind = rng.random()
        if kind < 0.15:
            pos = [(rng.randint(0, grid[0]), rng.randint(0, grid[1]))] * (steps + 1)
        elif kind < 0.5:
            off = rng.randint(0, max(horizon - steps, 0))
            pos = list(shared[off : off + steps + 1])
            if len(pos) < steps + 1:
                pos += [pos[-1]] * (steps + 1 - len(pos))
        else:
            pos = random_walk(rng, steps, grid, speed)
        trajs.append(Trajectory(oid, t_s, pos))
    return trajs


def random_region(rng: random.Random, grid: tuple[int, int], tight: bool = False) -> Region:
    max_x, max_y = grid
    x1 = rng.randint(0, max_x)
    y1 = rng.randint(0, max_y)
    span = 8 if tight else max(max_x // 3, 1)
    return Region(x1, y1, min(x1 + rng.randint(0, span), max_x),
                  min(y1 + rng.randint(0, span), max_y))


# -- naive counterparts of the reference operations --------------------------


def naive_movement(symbols, i: int, j: int) -> tuple[int, int]:
    dx = sum(s[0] for s in symbols[i:j])
    dy = sum(s[1] for s in symbols[i:j])
    return (dx, dy)


def naive_mbb(symbols, i: int, j: int) -> tuple[int, int, int, int]:
    x = y = 0
    xs, ys = [], []
    for t in range(i, j + 1):
        dx, dy = symbols[t - 1]
        x += dx
        y += dy
        xs.append(x)
        ys.append(y)
    return (min(xs), min(ys), max(xs), max(ys))


def naive_argext(values, i: int, j: int, mode: str) -> int:
    """Leftmost 1-based argmin/argmax of values[i..j] by linear scan."""
    window = values[i - 1 : j]
    target = min(window) if mode == "min" else max(window)
    return i + window.index(target)
