"""Static max-cover-by-unit-disks oracles.

``solve`` offers an exact branch-and-bound (deterministic: among equal-value
optima it returns the lexicographically smallest candidate-index set) and a
greedy fallback with the usual (1 - 1/e) guarantee.  The mask-based search
core is shared with the line-hitting solver in :mod:`stablecover.adversary`.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum

from .geometry import Assignment, Point, UnitDisk, assign_points, covers


class SolverKind(Enum):
    EXACT = "exact"
    GREEDY = "greedy"


class SolverBudgetError(Exception):
    """Exact search exceeded its node budget."""


@dataclass
class Solution:
    disks: list[UnitDisk]
    assignment: Assignment
    value: int

    def __post_init__(self) -> None:
        assert self.value == len(self.assignment)


DEFAULT_NODE_BUDGET = 5_000_000


def pad_disks(count: int, min_y: float, start: int = 0) -> list[UnitDisk]:
    """Deterministic throwaway disks placed well below ``min_y``."""
    return [
        UnitDisk(Point(0.0, min_y - 10.0 - 3.0 * (start + i)))
        for i in range(count)
    ]


def _bucket(p: Point) -> tuple[int, int]:
    return (math.floor(p.x / 2.0), math.floor(p.y / 2.0))


def candidate_disks(points: list[Point] | set[Point]) -> list[UnitDisk]:
    """Candidate centers that realize every achievable single-disk coverage set.

    One disk centered at each point, plus for every pair at distance <= 2 the
    one or two unit circles through both points.  Output is deduplicated and
    deterministic (sorted points, then sorted pairs, plus-normal circle first).
    """
    pts = sorted(set(points))
    out: list[UnitDisk] = []
    seen: set[Point] = set()

    def emit(center: Point) -> None:
        if center not in seen:
            seen.add(center)
            out.append(UnitDisk(center))

    for p in pts:
        emit(p)

    buckets: dict[tuple[int, int], list[int]] = defaultdict(list)
    for i, p in enumerate(pts):
        buckets[_bucket(p)].append(i)
    pairs = []
    for i, p in enumerate(pts):
        bx, by = _bucket(p)
        for nx in (bx - 1, bx, bx + 1):
            for ny in (by - 1, by, by + 1):
                for j in buckets.get((nx, ny), ()):
                    if j <= i:
                        continue
                    q = pts[j]
                    d2 = (p.x - q.x) ** 2 + (p.y - q.y) ** 2
                    if d2 <= 4.0:
                        pairs.append((i, j))
    pairs.sort()

    for i, j in pairs:
        p, q = pts[i], pts[j]
        for center in _circles_through(p, q):
            emit(center)
    return out


def _circles_through(p: Point, q: Point) -> list[Point]:
    """Centers of the unit circles through two points at distance <= 2.

    The half-distance term is clamped at 1 so near-tangent pairs cannot produce
    a NaN, and the perpendicular offset is pulled in by at most a few ulps so
    that ``covers`` holds exactly for both defining points.
    """
    mx = (p.x + q.x) / 2.0
    my = (p.y + q.y) / 2.0
    dx = q.x - p.x
    dy = q.y - p.y
    d = math.hypot(dx, dy)
    if d == 0.0:
        return [Point(mx, my)]
    half2 = min((d / 2.0) ** 2, 1.0)
    h = math.sqrt(1.0 - half2)
    ux, uy = -dy / d, dx / d
    centers = []
    for sign in (1.0, -1.0):
        scale = 1.0
        for _ in range(60):
            c = Point(mx + sign * h * scale * ux, my + sign * h * scale * uy)
            if covers(UnitDisk(c), p) and covers(UnitDisk(c), q):
                centers.append(c)
                break
            scale *= 1.0 - 1e-12
        else:  # pragma: no cover - would need absurd rounding
            centers.append(Point(mx, my))
    return centers


def coverage_masks(points: list[Point], disks: list[UnitDisk]) -> list[int]:
    """Bitmask over ``points`` of what each disk covers."""
    buckets: dict[tuple[int, int], list[int]] = defaultdict(list)
    for i, p in enumerate(points):
        buckets[(math.floor(p.x), math.floor(p.y))].append(i)
    masks = []
    for d in disks:
        cx, cy = math.floor(d.center.x), math.floor(d.center.y)
        m = 0
        for bx in range(cx - 1, cx + 2):
            for by in range(cy - 1, cy + 2):
                for i in buckets.get((bx, by), ()):
                    if covers(d, points[i]):
                        m |= 1 << i
        masks.append(m)
    return masks


def max_coverage_masks(
    masks: list[int],
    m: int,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> tuple[int, list[int]]:
    """Maximum union of ``m`` masks; ties by lexicographically smallest indices.

    The value search runs over distinct masks only; the returned index set is
    extracted from the full list, so equal-coverage duplicates may legitimately
    appear in it.  Returns the value and the chosen ascending index list of
    size ``min(m, len(masks))``.
    """
    if m <= 0 or not masks:
        return 0, []
    seen: set[int] = set()
    idxs: list[int] = []
    for i, mk in enumerate(masks):
        if mk not in seen:
            seen.add(mk)
            idxs.append(i)
    m = min(m, len(masks))
    uni = [masks[i] for i in idxs]
    pops = [mk.bit_count() for mk in uni]
    total_mask = 0
    for mk in uni:
        total_mask |= mk
    total = total_mask.bit_count()
    n = len(uni)

    nodes = 0

    def spend() -> None:
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise SolverBudgetError(f"exceeded {node_budget} search nodes")

    # Phase 1: best value over masks sorted by coverage (descending).
    order = sorted(range(n), key=lambda i: (-pops[i], i))
    sorted_masks = [uni[i] for i in order]
    sorted_pops = [pops[i] for i in order]
    prefix = [0] * (n + 1)
    for i in range(n):
        prefix[i + 1] = prefix[i] + sorted_pops[i]

    best = 0

    def search(pos: int, slots: int, mask: int, val: int) -> None:
        nonlocal best
        spend()
        if val > best:
            best = val
        if slots == 0 or pos == n or best == total:
            return
        hi = min(pos + slots, n)
        if val + prefix[hi] - prefix[pos] <= best:
            return
        gain_mask = sorted_masks[pos] & ~mask
        if gain_mask:
            search(pos + 1, slots - 1, mask | gain_mask, val + gain_mask.bit_count())
        search(pos + 1, slots, mask, val)

    search(0, m, 0, 0)

    # Phase 2: lexicographically first index set (over the full, undeduped
    # list) hitting the optimum.  Zero-marginal picks are allowed; both they
    # and duplicates can appear in the lexicographically smallest optimum.
    full_n = len(masks)
    full_pops = [mk.bit_count() for mk in masks]
    top_m_after: list[list[int]] = [[] for _ in range(full_n + 1)]
    for i in range(full_n - 1, -1, -1):
        merged = sorted(top_m_after[i + 1] + [full_pops[i]], reverse=True)[:m]
        top_m_after[i] = merged
    suffix_sum = [sum(t) for t in top_m_after]
    suffix_top = [_prefix_sums(t) for t in top_m_after]

    chosen: list[int] = []

    def extract(pos: int, slots: int, mask: int, val: int) -> bool:
        spend()
        if slots == 0:
            return val == best
        for i in range(pos, full_n - slots + 1):
            cap = suffix_top[i][slots] if slots < len(suffix_top[i]) else suffix_sum[i]
            if val + cap < best:
                break
            nm = mask | masks[i]
            if extract(i + 1, slots - 1, nm, nm.bit_count()):
                chosen.append(i)
                return True
        return False

    ok = extract(0, m, 0, 0)
    assert ok, "extraction must succeed once the optimum value is known"
    chosen.reverse()
    return best, chosen


def _prefix_sums(values: list[int]) -> list[int]:
    out = [0]
    for v in values:
        out.append(out[-1] + v)
    return out


def _greedy_masks(masks: list[int], m: int) -> list[int]:
    chosen: list[int] = []
    covered = 0
    used: set[int] = set()
    seen_mask: set[int] = set()
    distinct = []
    for i, mk in enumerate(masks):
        if mk not in seen_mask:
            seen_mask.add(mk)
            distinct.append(i)
    for _ in range(min(m, len(distinct))):
        best_gain = -1
        best_i = -1
        for i in distinct:
            if i in used:
                continue
            gain = (masks[i] & ~covered).bit_count()
            if gain > best_gain:
                best_gain = gain
                best_i = i
        chosen.append(best_i)
        used.add(best_i)
        covered |= masks[best_i]
    return chosen


def solve(
    points: list[Point] | set[Point],
    m: int,
    kind: SolverKind = SolverKind.EXACT,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> Solution:
    """Best coverage of ``points`` by ``m`` unit disks under the given oracle."""
    if m < 1:
        raise ValueError("m must be at least 1")
    pts = sorted(set(points))
    cands = candidate_disks(pts)
    masks = coverage_masks(pts, cands)
    if kind is SolverKind.EXACT:
        _, indices = max_coverage_masks(masks, m, node_budget)
    else:
        indices = _greedy_masks(masks, m)
    disks = [cands[i] for i in indices]
    if len(disks) < m:
        min_y = min((p.y for p in pts), default=0.0)
        disks += pad_disks(m - len(disks), min_y)
    assignment = assign_points(pts, disks)
    return Solution(disks=disks, assignment=assignment, value=len(assignment))
