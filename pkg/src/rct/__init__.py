"""Compressed in-memory index for moving-object trajectories.

Per-object movement logs are parsed against a shared artificial reference
(relative Lempel-Ziv); succinct overlays on the reference and on the phrase
sequences answer position, trajectory, time-slice and time-interval queries
without decompressing, with periodic k2-tree snapshots as spatial filters.
"""

from .bitvec import BitVector
from .dataio import DataError, read_trajectories
from .gen import generate_fleet
from .index import (
    NotFittedError,
    Query,
    RCTIndex,
    Region,
    SearchObject,
    TimeInterval,
    TimeSlice,
    Trajectory,
    TrajectoryBetween,
    as_region,
    run_query,
    validate_trajectories,
)
from .k2tree import Snapshot, build_snapshot
from .oracle import RawStore
from .reference import Reference, RelativeMBB, build_reference
from .rlz import Phrase, ReferenceMatcher, TrajectoryLog, build_log, decompress
from .rmq import MAX, MIN, RangeExtremumIndex
from .serialize import IndexFormatError, load_index, save_index

__version__ = "0.1.0"

__all__ = [
    "BitVector",
    "DataError",
    "IndexFormatError",
    "MAX",
    "MIN",
    "NotFittedError",
    "Phrase",
    "Query",
    "RCTIndex",
    "RangeExtremumIndex",
    "RawStore",
    "Reference",
    "ReferenceMatcher",
    "Region",
    "RelativeMBB",
    "SearchObject",
    "Snapshot",
    "TimeInterval",
    "TimeSlice",
    "Trajectory",
    "TrajectoryBetween",
    "TrajectoryLog",
    "as_region",
    "build_log",
    "build_reference",
    "build_snapshot",
    "decompress",
    "generate_fleet",
    "load_index",
    "read_trajectories",
    "run_query",
    "save_index",
    "validate_trajectories",
]
