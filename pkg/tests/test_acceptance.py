"""Acceptance gate: every criterion at its stated size and tolerance (all exact)."""

import contextlib
import io
import random
from contextlib import contextmanager

from helpers import make_dataset, naive_argext, naive_mbb, naive_movement, random_region
from rct import (
    BitVector,
    Phrase,
    RCTIndex,
    RangeExtremumIndex,
    RawStore,
    Reference,
    ReferenceMatcher,
    SearchObject,
    TimeInterval,
    TimeSlice,
    TrajectoryBetween,
    build_snapshot,
    decompress,
    load_index,
    run_query,
    save_index,
)
from rct.cli import main
from rct.rmq import MAX, MIN


@contextmanager
def criterion(number: int, title: str):
    try:
        yield
    except Exception:
        print(f"[criterion {number}] FAIL: {title}")
        raise
    print(f"[criterion {number}] PASS: {title}")


def test_criterion_1_rlz_worked_example():
    with criterion(1, "RLZ worked example parses to (8,3)(4,3)(5,5) and inverts"):
        reference = "tggcacttgat"
        matcher = ReferenceMatcher(reference)
        phrases = matcher.parse("tgacacacttg")
        assert [(p.start, p.length) for p in phrases] == [(8, 3), (4, 3), (5, 5)]
        assert "".join(decompress(phrases, reference)) == "tgacacacttg"
        assert phrases == [Phrase(8, 3), Phrase(4, 3), Phrase(5, 5)]


def test_criterion_2_unary_encoding_example():
    with criterion(2, "unary coding of one +2 x-step is x_p=001, x_n=1; select recovers 2"):
        ref = Reference([(2, 0)])
        assert ref.x_pos.to01() == "001"
        assert ref.x_neg.to01() == "1"
        # movement through the select-based deltas
        assert ref.x_pos.select1(1) - 1 == 2
        assert ref.x_neg.select1(1) - 1 == 0
        assert ref.movement(0, 1) == (2, 0)


def _random_query(rng, idx):
    ids = sorted(idx.logs_)
    kind = rng.randrange(4)
    t_max = idx.t_max_
    if kind == 0:
        return SearchObject(rng.choice(ids), rng.randint(-3, t_max + 3))
    if kind == 1:
        a = rng.randint(-2, t_max + 2)
        return TrajectoryBetween(rng.choice(ids), a, a + rng.randint(0, 80))
    region = random_region(rng, idx.grid_, tight=rng.random() < 0.4)
    if kind == 2:
        return TimeSlice(region, rng.randint(-1, t_max + 1))
    a = rng.randint(0, t_max)
    return TimeInterval(region, a, min(a + rng.randint(0, 60), t_max))


def test_criterion_3_oracle_equivalence():
    with criterion(3, "100 randomized datasets x 200 queries agree with the oracle"):
        rng = random.Random(20240)
        for _ in range(100):
            trajs = make_dataset(
                rng, max_objects=20, max_duration=500, grid=(1023, 1023), speed=3
            )
            idx = RCTIndex(period=rng.choice([4, 8, 16, 32, 64])).fit(trajs)
            store = RawStore(trajs)
            for _ in range(200):
                q = _random_query(rng, idx)
                assert run_query(idx, q) == run_query(store, q), f"{q} diverged"


def test_criterion_4_round_trip_replay():
    with criterion(4, "replayed positions equal raw positions at every timestamp"):
        rng = random.Random(417)
        for _ in range(25):
            trajs = make_dataset(rng, max_objects=15, max_duration=300)
            idx = RCTIndex(period=16).fit(trajs)
            for tr in trajs:
                replay = idx.trajectory(tr.object_id, tr.start_time, tr.end_time)
                expected = [
                    (tr.start_time + k, x, y) for k, (x, y) in enumerate(tr.positions)
                ]
                assert replay == expected


def test_criterion_5_reference_micro_properties():
    with criterion(5, "movement and mbb equal brute force on 10^4 random ranges"):
        rng = random.Random(555)
        symbols = [(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(400)]
        ref = Reference(symbols)
        m = len(symbols)
        for _ in range(10_000):
            i = rng.randint(0, m)
            j = rng.randint(i, m)
            assert ref.movement(i, j) == naive_movement(symbols, i, j)
        for _ in range(10_000):
            i = rng.randint(1, m)
            j = rng.randint(i, m)
            box = ref.mbb(i, j)
            assert tuple(box) == naive_mbb(symbols, i, j)
        # containment, tightness, monotone growth on a sampled subset
        for _ in range(500):
            i = rng.randint(1, m)
            j = rng.randint(i, m)
            box = ref.mbb(i, j)
            xs, ys = [], []
            for t in range(i, j + 1):
                dx, dy = ref.movement(i - 1, t)
                assert box.x_min <= dx <= box.x_max and box.y_min <= dy <= box.y_max
                xs.append(dx)
                ys.append(dy)
            assert box.x_min in xs and box.x_max in xs
            assert box.y_min in ys and box.y_max in ys
            if j < m:
                grown = ref.mbb(i, j + 1)
                assert grown.x_min <= box.x_min and grown.x_max >= box.x_max
                assert grown.y_min <= box.y_min and grown.y_max >= box.y_max


def test_criterion_6_substructure_equivalence():
    with criterion(6, "bitvector, extremum index and k2-tree match naive scans"):
        rng = random.Random(66)
        # rank/select/access vs naive scan, up to 10^6 bits
        for n, density in ((1_000_000, 0.4), (100_000, 0.005), (4096, 0.9)):
            bits = [1 if rng.random() < density else 0 for _ in range(n)]
            bv = BitVector(bits)
            prefix = [0]
            for b in bits:
                prefix.append(prefix[-1] + b)
            ones = [i + 1 for i, b in enumerate(bits) if b]
            assert bv.ones == len(ones)
            for _ in range(2000):
                i = rng.randint(0, n)
                assert bv.rank1(i) == prefix[i]
                if i:
                    assert bv.access(i) == bits[i - 1]
                j = rng.randint(1, len(ones))
                assert bv.select1(j) == ones[j - 1]
        # rmq / rMq vs linear scan with leftmost ties on 10^4 random ranges
        values = [rng.randint(-40, 40) for _ in range(1000)]
        by_mode = {m: RangeExtremumIndex(values, m) for m in (MIN, MAX)}
        for _ in range(5000):
            i = rng.randint(1, 1000)
            j = rng.randint(i, 1000)
            for mode, idx in by_mode.items():
                assert idx.query(i, j) == naive_argext(values, i, j, mode)
        # k2-tree region reporting vs naive filtering on 1000 random instances
        for _ in range(1000):
            max_x = rng.randint(0, 1023)
            max_y = rng.randint(0, 1023)
            points = [
                (oid, rng.randint(0, max_x), rng.randint(0, max_y))
                for oid in range(rng.randint(0, 50))
            ]
            sn = build_snapshot(points, (max_x, max_y))
            region = random_region(rng, (max_x, max_y))
            expected = {
                (oid, x, y)
                for oid, x, y in points
                if region.x1 <= x <= region.x2 and region.y1 <= y <= region.y2
            }
            assert sn.report_region(region) == expected


def _cli(args) -> str:
    out = io.StringIO()
    with contextlib.redirect_stdout(out):
        code = main(args)
    assert code == 0, f"command {args} exited {code}"
    return out.getvalue()


def test_criterion_7_compression_sanity(tmp_path):
    with criterion(7, "z_total <= 0.10 x movements at mutation 0.01; ratio improves with similarity"):
        ratios = {}
        for rate in ("0.5", "0.1", "0.01"):
            csv_path = tmp_path / f"fleet_{rate}.csv"
            idx_path = tmp_path / f"fleet_{rate}.rct"
            csv_path.write_text(
                _cli(
                    ["gen", "--objects", "50", "--steps", "1000", "--grid", "1000",
                     "--routes", "5", "--mutation-rate", rate, "--seed", "11"]
                )
            )
            stats = dict(
                kv.split("=")
                for kv in _cli(["build", str(csv_path), str(idx_path),
                                "--ref-fraction", "1/10"]).split()
            )
            ratios[rate] = float(stats["ratio"])
            if rate == "0.01":
                assert int(stats["movements"]) == 50_000
                assert int(stats["phrases"]) <= 0.10 * int(stats["movements"])
        assert ratios["0.5"] > ratios["0.1"] > ratios["0.01"]


def test_criterion_8_serialization_round_trip():
    with criterion(8, "save/load preserves every query answer on 20 datasets"):
        rng = random.Random(88)
        for _ in range(20):
            trajs = make_dataset(rng, max_objects=12, max_duration=150)
            idx = RCTIndex(period=rng.choice([8, 16])).fit(trajs)
            buf = io.BytesIO()
            save_index(idx, buf)
            buf.seek(0)
            back = load_index(buf)
            for _ in range(60):
                q = _random_query(rng, idx)
                assert run_query(idx, q) == run_query(back, q), f"{q} diverged"
