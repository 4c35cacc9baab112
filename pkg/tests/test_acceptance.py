"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest -s tests/test_acceptance.py`` to see the per-criterion
summary lines.
"""

import itertools
import math
import random
import time

import pytest

from stablecover.adversary import (
    ExactMaintainer,
    build_line_instance,
    concurrency_census,
    double_cover,
    evaluate_hitting,
    lower_bound_stream,
    random_expander,
    sampled_expansion_check,
)
from stablecover.adversary.streams import disk_churn
from stablecover.geometry import (
    GridSpec,
    Point,
    UnitDisk,
    assign_points,
    cell_cover,
    covers,
    select_grid,
)
from stablecover.harness_cli import RunConfig, gen_random, parse_stream, run
from stablecover.sas_engine import (
    EngineConfig,
    make_blocks,
    prefix_balanced_order,
    select_group,
)
from stablecover.static_solver import candidate_disks, coverage_masks, solve


def announce(num, text):
    print(f"ACCEPTANCE {num} PASS: {text}")


# ---------------------------------------------------------------------------
# Criteria 1 + 2 share the same 30 random-stream runs.


@pytest.fixture(scope="module")
def random_runs():
    runs = []
    t0 = time.time()
    for i in range(30):
        m = (2, 3, 4)[i % 3]
        n_events = 120 + (i * 17) % 81  # 120..200
        delete_prob = (0.0, 0.15, 0.3)[i % 3]
        rows = gen_random(n_events, 100.0, seed=1000 + i, delete_prob=delete_prob)
        stream = parse_stream("\n".join(rows))
        report = run(RunConfig(engine="sas", m=m, epsilon=0.25), stream)
        parsed = [r.split(",") for r in report.splitlines()[1:-1]]
        runs.append((stream, m, parsed))
    elapsed = time.time() - t0
    return runs, elapsed


def test_criterion_1_ratio_invariant(random_runs):
    runs, elapsed = random_runs
    events = 0
    for _, _, rows in runs:
        for row in rows:
            alg, opt = int(row[2]), int(row[3])
            assert 4 * opt <= 5 * alg  # opt <= (1 + 1/4) * alg, exactly
            events += 1
    assert elapsed < 120.0, f"runtime {elapsed:.1f}s exceeds 2 minutes"
    announce(1, f"opt <= 1.25*alg on {events} events across 30 streams ({elapsed:.1f}s)")


def test_criterion_2_churn_bound(random_runs):
    runs, _ = random_runs
    for _, m, rows in runs:
        for row in rows:
            assert int(row[5]) <= 2 * m
    announce(2, "churn <= 2m on every event of the same 30 streams")


def test_criterion_3_two_stable(random_runs):
    runs, _ = random_runs
    events = 0
    for stream, m, _ in runs:
        report = run(RunConfig(engine="two_stable", m=m, epsilon=0.25), stream)
        for r in report.splitlines()[1:-1]:
            row = r.split(",")
            alg, opt, churn = int(row[2]), int(row[3]), int(row[5])
            assert churn <= 2
            assert opt <= 2 * alg
            events += 1
    announce(3, f"two-stable kept churn <= 2 and opt <= 2*alg on {events} events")


def test_criterion_4_exact_maintenance_lower_bound():
    churns = {}
    for m in (2, 3, 4):
        stream = lower_bound_stream(m)
        maintainer = ExactMaintainer(m)
        for p in stream.prefix:
            maintainer.apply("insert", p)
        before = maintainer.solution()
        trigger = stream.choose_trigger(before)
        maintainer.apply("insert", trigger)
        churn = disk_churn(before, maintainer.solution())
        assert churn >= m
        churns[m] = churn
    announce(4, f"trigger churn per m: {churns} (each >= m)")


def test_criterion_5a_prefix_balanced_order():
    rng = random.Random(501)
    for _ in range(200):
        bound = rng.randint(2, 10)
        n = rng.randint(1, 15)
        items = []
        for i in range(n):
            items.append((i, rng.randint(0, bound), rng.randint(0, bound)))
        diff = sum(a for _, a, _ in items) - sum(o for _, _, o in items)
        nid = n
        while diff != 0:
            chunk = min(abs(diff), bound)
            items.append((nid, 0, chunk) if diff > 0 else (nid, chunk, 0))
            diff += -chunk if diff > 0 else chunk
            nid += 1
        order = prefix_balanced_order(items, bound)
        lookup = {i: (a, o) for i, a, o in items}
        running = 0
        for ident in order:
            a, o = lookup[ident]
            running += a - o
            assert abs(running) <= bound
    announce(5, "(a) prefix inequality rechecked on 200 random balanced inputs")


def test_criterion_5b_block_creation():
    rng = random.Random(502)
    for _ in range(200):
        per_cell = rng.randint(1, 5)
        block_min = rng.randint(1, 5)
        block_max = block_min + per_cell + rng.randint(0, 6)
        n = rng.randint(1, 20)
        items = [(i, rng.randint(0, per_cell), rng.randint(0, per_cell)) for i in range(n)]
        total = sum(a for _, a, _ in items)
        if total <= block_min:
            continue
        diff = total - sum(o for _, _, o in items)
        nid = n
        while diff != 0:
            chunk = min(abs(diff), per_cell)
            items.append((nid, 0, chunk) if diff > 0 else (nid, chunk, 0))
            diff += -chunk if diff > 0 else chunk
            nid += 1
        balance = max(max(a, o) for _, a, o in items)
        order = prefix_balanced_order(items, balance)
        lookup = {i: (i, a, o) for i, a, o in items}
        ordered = [lookup[i] for i in order]
        blocks = make_blocks(ordered, block_min, block_max)
        assert [it for b in blocks for it in b.items] == ordered
        for b in blocks:
            assert b.alg_total <= block_max
            assert abs(b.alg_total - b.opt_total) <= 2 * balance
        for b in blocks[:-1]:
            assert b.alg_total >= block_min
    announce(5, "(b) block bounds held on 200 random orderings")


def _brute_force_group(stats, kappa, extend):
    n = len(stats)
    for i in range(1, kappa + 1):
        groups = []
        if i > 1:
            groups.append((0, i - 1))
        j = i - 1
        while j < n:
            groups.append((j, min(j + kappa, n)))
            j += kappa
        for lo, hi in groups:
            if n - hi >= extend:
                es, ee = hi, hi + extend
            elif lo - extend >= 0:
                es, ee = lo - extend, lo
            else:
                continue
            gain = sum(s[2] for s in stats[lo:hi])
            loss = sum(s[3] for s in stats[lo:hi]) + sum(s[3] for s in stats[es:ee])
            if gain > loss:
                return (i, (lo, hi), (es, ee))
    return None


def test_criterion_5c_group_choice_matches_enumeration():
    rng = random.Random(503)
    matched = 0
    for _ in range(100):
        kappa = rng.randint(3, 5)
        extend = rng.randint(1, 2)
        n = rng.randint(3 * kappa, 7 * kappa)
        stats = [
            (rng.randint(1, 4), rng.randint(0, 4), rng.randint(0, 8), rng.randint(0, 4))
            for _ in range(n)
        ]
        got = select_group(stats, kappa, extend)
        want = _brute_force_group(stats, kappa, extend)
        if want is None:
            assert got is None
        else:
            assert (got.partition, got.group, got.extension) == want
            matched += 1
    assert matched >= 80  # the trials must actually exercise the scan
    announce(5, f"(c) group choice matched exhaustive scan on 100 trials ({matched} non-trivial)")


def _independent_boundary(disk, grid):
    # Recount helper kept separate from the library's modular-arithmetic test.
    out = False
    for coord, offset in ((disk.center.x, grid.offset_x), (disk.center.y, grid.offset_y)):
        k = math.floor((coord - offset) / grid.edge)
        for kk in (k, k + 1):
            line = offset + kk * grid.edge
            if abs(coord - line) < 1.0:
                out = True
    return out


def test_criterion_6_grid_selection():
    rng = random.Random(600)
    eps = 0.25
    accepted = 0
    while accepted < 100:
        n = rng.randint(18, 40)
        m = rng.randint(2, 4)
        pts = [Point(rng.uniform(0, 100), rng.uniform(0, 100)) for _ in range(n)]
        opt_disks = [UnitDisk(rng.choice(pts)) for _ in range(m)]
        alg_disks = [
            UnitDisk(Point(rng.uniform(0, 100), rng.uniform(0, 100))) for _ in range(m)
        ]
        a_opt = assign_points(pts, opt_disks)
        a_alg = assign_points(pts, alg_disks)
        if len(a_opt) <= (1 + eps) * len(a_alg):
            continue
        grid = select_grid(opt_disks, alg_disks, a_opt, a_alg, eps)
        recount = 0
        for disks, assignment in ((opt_disks, a_opt), (alg_disks, a_alg)):
            for p, idx in assignment.items():
                if _independent_boundary(disks[idx], grid):
                    recount += 1
        assert recount <= 0.5 * eps * len(a_opt)
        accepted += 1
    announce(6, "selected grids kept boundary-assigned points within budget, 100 configs")


def test_criterion_7_cell_cover():
    rng = random.Random(700)
    cfg = EngineConfig(m=2, epsilon=0.25)
    grid = GridSpec(cfg.grid_edge, 3, 7)
    cell = (2, -1)
    disks = cell_cover(cell, grid, 0.25)
    assert len(disks) <= cfg.cover_budget
    x0 = grid.offset_x + cell[0] * grid.edge
    y0 = grid.offset_y + cell[1] * grid.edge
    for _ in range(1000):
        p = Point(x0 + rng.uniform(0, grid.edge), y0 + rng.uniform(0, grid.edge))
        assert any(covers(d, p) for d in disks)
    announce(7, f"1000 random cell points covered by {len(disks)} disks (budget {cfg.cover_budget})")


def test_criterion_8_exact_equals_brute_force():
    rng = random.Random(800)
    for trial in range(100):
        n = rng.randint(4, 12)
        m = rng.randint(1, 3)
        pts = {Point(rng.uniform(0, 8), rng.uniform(0, 8)) for _ in range(n)}
        spts = sorted(pts)
        masks = coverage_masks(spts, candidate_disks(spts))
        distinct = sorted(set(masks))  # value-preserving reduction
        best = 0
        for combo in itertools.combinations(distinct, min(m, len(distinct))):
            u = 0
            for mk in combo:
                u |= mk
            best = max(best, u.bit_count())
        assert solve(pts, m).value == best
    announce(8, "branch-and-bound equals m-subset enumeration on 100 instances")


def test_criterion_9_line_construction_values():
    t0 = time.time()
    for m in (6, 9):
        inst = build_line_instance(m, seed=1)
        rep = inst.side_rep("L")
        lines = rep.line_list()
        assert len(lines) == 4 * m
        census = concurrency_census(lines)
        assert max(len(v) for v in census.values()) == 4
        assert evaluate_hitting(inst.r_points, lines) == 4 * m
    elapsed = time.time() - t0
    assert elapsed < 30.0
    announce(9, f"4m lines, concurrency 4, R stabs all, m in {{6,9}} ({elapsed:.1f}s)")


def test_criterion_10_expander_structure():
    for n in (4, 30, 60):
        g = random_expander(n, seed=1)
        assert g.is_bipartite_lr()
        assert set(g.degrees()) == {3}
        assert sampled_expansion_check(g, 0.1, 1000, seed=99)
    tri_edges = set()
    for t in range(10):
        a, b, c = 3 * t, 3 * t + 1, 3 * t + 2
        tri_edges |= {(a, b), (b, c), (a, c)}
    control = double_cover(tri_edges, 30)
    assert not sampled_expansion_check(control, 0.1, 1000, seed=99)
    announce(10, "double covers bipartite 3-regular; sampled check passes, control fails")


def test_criterion_11_determinism():
    rows = gen_random(80, 100.0, seed=42, delete_prob=0.1)
    stream = parse_stream("\n".join(rows))
    cfg = RunConfig(engine="sas", m=3, epsilon=0.25)
    first = run(cfg, stream)
    second = run(cfg, stream)
    assert first == second
    assert gen_random(80, 100.0, seed=42, delete_prob=0.1) == rows
    announce(11, "identical seeds produce byte-identical streams and reports")
