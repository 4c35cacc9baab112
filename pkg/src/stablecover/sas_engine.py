"""Stable approximation engine for dynamic max cover by unit disks.

Per update the engine recomputes an oracle optimum; while the maintained
solution stays within a ``1+epsilon`` factor nothing changes.  Otherwise it
applies one bounded swap, constructed through a pipeline of shifted-grid
selection, prefix-balanced cell ordering, block creation, a prefix-balanced
block ordering, and a scan over a family of block partitions.  Every applied
swap is re-verified by direct recount, never trusted from construction.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum

from .geometry import (
    Assignment,
    CellId,
    GridSelectionError,
    GridSpec,
    Point,
    UnitDisk,
    assign_points,
    cell_cover,
    cell_cover_size,
    cell_of,
    covers,
    grid_shift_count,
    is_boundary,
    select_grid,
)
from .static_solver import Solution, SolverKind, solve


class Branch(Enum):
    NO_CHANGE = "NoChange"
    TRIVIAL_SWAP_ALL = "TrivialSwapAll"
    CELL_OVERFLOW = "CellOverflow"
    FEW_BLOCKS_SWAP_ALL = "FewBlocksSwapAll"
    GROUP_SWAP = "GroupSwap"
    SINGLE_SWAP = "SingleSwap"  # used by the 2-stable baseline


class EngineInvariantError(Exception):
    """An internal guarantee failed; indicates a bug or a bad configuration."""


class StreamError(Exception):
    """Malformed update (duplicate insert or delete of an absent point)."""


@dataclass
class EngineConfig:
    """All tunables of the swap pipeline.

    With ``scaled_mode=False`` the derived constants follow the standard
    formulas in ``epsilon`` (ceilings applied to every ``1/epsilon`` power).
    ``scaled_mode=True`` permits overriding any of them so the combinatorial
    pipeline can be exercised at desk scale; the group-existence guarantee is
    then no longer promised and a failed group search falls back to swapping
    everything.
    """

    m: int
    epsilon: float
    c_star: int = 128
    solver: SolverKind = SolverKind.EXACT
    scaled_mode: bool = False
    trivial_threshold: int | None = None
    kappa: int | None = None
    block_min: int | None = None
    block_max: int | None = None
    balance_cells: int | None = None
    balance_blocks: int | None = None
    extend: int | None = None
    grid_shifts: int | None = None
    grid_edge: float | None = None
    node_budget: int = 5_000_000

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("m must be at least 1")
        if not 0.0 < self.epsilon < 0.5:
            raise ValueError("epsilon must lie in (0, 1/2)")
        eps = self.epsilon
        if self.trivial_threshold is None:
            self.trivial_threshold = math.ceil(1.0 / eps**3)
        if self.extend is None:
            self.extend = 6 * self.c_star + 4
        if self.kappa is None:
            self.kappa = math.ceil(8.0 * (6 * self.c_star + 4) / eps) + 1
        if self.block_min is None:
            self.block_min = math.ceil(1.0 / eps**2)
        if self.block_max is None:
            self.block_max = math.ceil((self.c_star + 2) / eps**2)
        if self.balance_cells is None:
            self.balance_cells = math.ceil(self.c_star / eps**2)
        if self.balance_blocks is None:
            self.balance_blocks = math.ceil((3 * self.c_star + 2) / eps**2)
        if self.grid_shifts is None:
            self.grid_shifts = grid_shift_count(eps)
        if self.grid_edge is None:
            self.grid_edge = 2.0 * self.grid_shifts
        if self.kappa <= self.extend:
            raise ValueError("kappa must exceed the group extension length")
        if self.block_max < self.block_min:
            raise ValueError("block_max must be at least block_min")

    @property
    def cover_budget(self) -> int:
        """Disks emitted by a cell cover; also the cell-overflow threshold."""
        return max(self.balance_cells, cell_cover_size(self.grid_edge))

    def churn_bound(self, branch: Branch) -> int:
        if branch is Branch.NO_CHANGE:
            return 0
        if branch in (Branch.TRIVIAL_SWAP_ALL, Branch.FEW_BLOCKS_SWAP_ALL):
            return 2 * self.m
        if branch is Branch.CELL_OVERFLOW:
            return 2 * (self.cover_budget + 1)
        if branch is Branch.SINGLE_SWAP:
            return 2
        return 2 * (self.kappa + self.extend) * self.block_max


@dataclass
class EngineState:
    config: EngineConfig
    t: int = 0
    points: set[Point] = field(default_factory=set)
    disks: list[UnitDisk] = field(default_factory=list)
    assignment: Assignment = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.disks:
            # Arbitrary initial solution, far below anything a stream inserts.
            self.disks = [
                UnitDisk(Point(0.0, -1000.0 - 3.0 * i))
                for i in range(self.config.m)
            ]
        if len(self.disks) != self.config.m:
            raise ValueError(f"need exactly m={self.config.m} disks")

    @property
    def alg_value(self) -> int:
        return len(self.assignment)


@dataclass
class CellRecord:
    cell: CellId
    alg_disks: list[int]
    opt_disks: list[int]
    pstar_count: int
    palg_count: int


@dataclass
class Block:
    items: list[tuple]  # consecutive (id, alg_count, opt_count) triples

    @property
    def alg_total(self) -> int:
        return sum(it[1] for it in self.items)

    @property
    def opt_total(self) -> int:
        return sum(it[2] for it in self.items)


@dataclass
class Swap:
    s_old: list[int]
    s_new: list[UnitDisk]
    branch: Branch

    def __post_init__(self) -> None:
        assert len(self.s_new) <= len(self.s_old)


@dataclass
class UpdateReport:
    t: int
    op: str
    alg_value: int
    opt_value: int
    churn: int
    branch: Branch


def prefix_balanced_order(items, bound: int):
    """Order ``(id, alg_count, opt_count)`` items so every prefix is balanced.

    Requires equal totals and per-item counts at most ``bound``; then every
    prefix satisfies ``|sum(alg) - sum(opt)| <= bound``.  The first item is the
    lowest id, after which the lowest eligible id is taken each round.
    """
    items = list(items)
    if sum(it[1] for it in items) != sum(it[2] for it in items):
        raise ValueError("alg and opt totals differ; pad before ordering")
    for it in items:
        if it[1] > bound or it[2] > bound:
            raise ValueError(f"item {it[0]} exceeds the balance bound {bound}")
    remaining = sorted(items, key=lambda it: it[0])
    if not remaining:
        return []
    order = [remaining.pop(0)]
    gap = order[0][1] - order[0][2]
    while remaining:
        if gap >= 0:
            pick = next(i for i, it in enumerate(remaining) if it[2] >= it[1])
        else:
            pick = next(i for i, it in enumerate(remaining) if it[2] < it[1])
        it = remaining.pop(pick)
        order.append(it)
        gap += it[1] - it[2]
    running = 0
    for it in order:
        running += it[1] - it[2]
        assert abs(running) <= bound
    return [it[0] for it in order]


def make_blocks(ordered, block_min: int, block_max: int) -> list[Block]:
    """Greedy partition of prefix-balance-ordered cells into blocks.

    Accumulates cells until the algorithm-disk count reaches ``block_min``,
    except that a tail whose total is at most ``block_max`` becomes the final
    block in one piece.
    """
    ordered = list(ordered)
    blocks: list[Block] = []
    j = 0
    n = len(ordered)
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + ordered[i][1]
    while j < n:
        if suffix[j] <= block_max:
            blocks.append(Block(ordered[j:]))
            break
        acc = 0
        jp = j
        while acc < block_min:
            acc += ordered[jp][1]
            jp += 1
        blocks.append(Block(ordered[j:jp]))
        j = jp
    return blocks


def partition_ranges(num_blocks: int, i: int, kappa: int) -> list[tuple[int, int]]:
    """Half-open group ranges of the i-th partition of the block sequence.

    The first group holds ``i-1`` blocks (dropped when empty); the rest have
    exactly ``kappa`` blocks except possibly the last.
    """
    ranges = []
    if i > 1:
        ranges.append((0, i - 1))
    j = i - 1
    while j < num_blocks:
        ranges.append((j, min(j + kappa, num_blocks)))
        j += kappa
    return ranges


def extended_range(
    num_blocks: int, lo: int, hi: int, extend: int
) -> tuple[int, int] | None:
    """Blocks appended to a group: the ``extend`` following it, else preceding."""
    if num_blocks - hi >= extend:
        return (hi, hi + extend)
    if lo - extend >= 0:
        return (lo - extend, lo)
    return None


@dataclass
class GroupChoice:
    partition: int
    group: tuple[int, int]
    extension: tuple[int, int]


def select_group(
    stats: list[tuple[int, int, int, int]], kappa: int, extend: int
) -> GroupChoice | None:
    """First group (partitions ascending, groups left to right) worth swapping.

    ``stats`` carries per-block ``(alg_disks, opt_disks, pstar_points,
    palg_points)`` in block order.  A group qualifies when the optimum's
    reliably-new points inside it strictly exceed the points held by the
    algorithm's disks in the extended group.
    """
    n = len(stats)
    pstar = [0] * (n + 1)
    palg = [0] * (n + 1)
    for i, st in enumerate(stats):
        pstar[i + 1] = pstar[i] + st[2]
        palg[i + 1] = palg[i] + st[3]
    for i in range(1, kappa + 1):
        for lo, hi in partition_ranges(n, i, kappa):
            ext = extended_range(n, lo, hi, extend)
            if ext is None:
                continue
            es, ee = ext
            gain = pstar[hi] - pstar[lo]
            loss = (palg[hi] - palg[lo]) + (palg[ee] - palg[es])
            if gain > loss:
                return GroupChoice(i, (lo, hi), (es, ee))
    return None


def pad_opt(
    internal_opt_disks: list[UnitDisk],
    m: int,
    occupied_cells: set[CellId],
    grid: GridSpec,
    min_y: float,
) -> list[UnitDisk]:
    """Dummy disks bringing the internal-optimum list up to ``m`` entries.

    Each dummy sits at the center of a previously empty cell in the grid
    column nearest x=0, on rows descending from below ``min_y``; cell centers
    keep the dummies internal whenever the cell edge is at least 2.  Dummies
    are never assigned points.
    """
    need = m - len(internal_opt_disks)
    assert need >= 0
    if need == 0:
        return []
    col = math.floor((0.0 - grid.offset_x) / grid.edge)
    x = grid.offset_x + (col + 0.5) * grid.edge
    row = math.floor((min_y - 10.0 - grid.offset_y) / grid.edge)
    dummies: list[UnitDisk] = []
    taken = set(occupied_cells)
    while len(dummies) < need:
        cell = CellId(col, row)
        if cell not in taken:
            y = grid.offset_y + (row + 0.5) * grid.edge
            dummies.append(UnitDisk(Point(x, y)))
            taken.add(cell)
        row -= 1
    return dummies


def _multiset_churn(old: list[UnitDisk], new: list[UnitDisk]) -> int:
    a, b = Counter(old), Counter(new)
    return sum((a - b).values()) + sum((b - a).values())


def _swap_everything(state: EngineState, disks: list[UnitDisk], branch: Branch) -> Swap:
    return Swap(s_old=list(range(len(state.disks))), s_new=list(disks), branch=branch)


def find_valid_swap(state: EngineState, opt_sol: Solution | None = None) -> Swap:
    """Construct a coverage-increasing swap of bounded size.

    Precondition: the oracle optimum strictly exceeds ``(1+epsilon)`` times the
    current coverage and ``m`` is above the trivial threshold.
    """
    cfg = state.config
    if opt_sol is None:
        opt_sol = solve(state.points, cfg.m, cfg.solver, cfg.node_budget)
    cur = state.alg_value

    try:
        grid = select_grid(
            opt_sol.disks,
            state.disks,
            opt_sol.assignment,
            state.assignment,
            cfg.epsilon,
            edge=cfg.grid_edge,
            shifts=cfg.grid_shifts,
        )
    except GridSelectionError:
        if cfg.scaled_mode:
            return _swap_everything(state, opt_sol.disks, Branch.TRIVIAL_SWAP_ALL)
        raise

    alg_boundary = [is_boundary(d, grid) for d in state.disks]
    opt_boundary = [is_boundary(d, grid) for d in opt_sol.disks]
    boundary_alg_points = {
        p for p, i in state.assignment.items() if alg_boundary[i]
    }

    alg_counts = Counter(state.assignment.values())
    cell_alg: dict[CellId, list[int]] = defaultdict(list)
    for i, d in enumerate(state.disks):
        cell_alg[cell_of(d.center, grid)].append(i)

    opt_points: dict[int, list[Point]] = defaultdict(list)
    for p, k in opt_sol.assignment.items():
        opt_points[k].append(p)
    cell_opt: dict[CellId, list[int]] = defaultdict(list)
    pstar_cell: dict[CellId, int] = defaultdict(int)
    for k, d in enumerate(opt_sol.disks):
        if opt_boundary[k]:
            continue
        cell = cell_of(d.center, grid)
        cell_opt[cell].append(k)
        pstar_cell[cell] += sum(
            1 for p in opt_points[k] if p not in boundary_alg_points
        )

    pstar_total = sum(pstar_cell.values())
    if pstar_total < (1.0 + cfg.epsilon / 4.0) * cur:
        raise EngineInvariantError(
            "internal-optimum surplus bound violated after grid selection"
        )

    # A cell holding more algorithm disks than a full cell cover admits a
    # direct swap: retile the cell and add one disk on an uncovered point.
    overflow = sorted(
        c for c, idxs in cell_alg.items() if len(idxs) > cfg.cover_budget
    )
    if overflow:
        cell = overflow[0]
        tiles = cell_cover(cell, grid, cfg.epsilon)
        uncovered = min(p for p in state.points if p not in state.assignment)
        s_new = tiles + [UnitDisk(uncovered)]
        ordered = sorted(cell_alg[cell], key=lambda i: (alg_boundary[i], i))
        return Swap(s_old=ordered[: len(s_new)], s_new=s_new, branch=Branch.CELL_OVERFLOW)

    # Pad the internal optimum to m disks with point-free dummies in fresh
    # cells, then order cells so every prefix is balanced.
    internal_opt = [opt_sol.disks[k] for c in cell_opt for k in cell_opt[c]]
    occupied = set(cell_alg) | set(cell_opt)
    min_y = min((p.y for p in state.points), default=0.0)
    min_y = min([min_y] + [d.center.y for d in state.disks])
    dummies = pad_opt(internal_opt, cfg.m, occupied, grid, min_y)

    records: dict[CellId, CellRecord] = {}
    for cell in occupied:
        records[cell] = CellRecord(
            cell=cell,
            alg_disks=sorted(cell_alg.get(cell, [])),
            opt_disks=sorted(cell_opt.get(cell, [])),
            pstar_count=pstar_cell.get(cell, 0),
            palg_count=sum(alg_counts[i] for i in cell_alg.get(cell, [])),
        )
    dummy_cells: dict[CellId, UnitDisk] = {}
    for d in dummies:
        cell = cell_of(d.center, grid)
        dummy_cells[cell] = d
        records[cell] = CellRecord(cell, [], [], 0, 0)

    cell_items = [
        (cell, len(rec.alg_disks), len(rec.opt_disks) + (1 if cell in dummy_cells else 0))
        for cell, rec in sorted(records.items())
    ]
    cell_bound = max(
        [cfg.cover_budget]
        + [it[1] for it in cell_items]
        + [it[2] for it in cell_items]
    )
    order = prefix_balanced_order(cell_items, cell_bound)
    count_by_cell = {it[0]: it for it in cell_items}
    ordered = [count_by_cell[c] for c in order]

    blocks = make_blocks(ordered, cfg.block_min, cfg.block_max)
    if len(blocks) < 3 * cfg.kappa:
        s_new = internal_opt + dummies
        return Swap(
            s_old=list(range(len(state.disks))),
            s_new=s_new,
            branch=Branch.FEW_BLOCKS_SWAP_ALL,
        )

    block_items = [(rank, b.alg_total, b.opt_total) for rank, b in enumerate(blocks)]
    block_bound = max(
        [cfg.balance_blocks]
        + [it[1] for it in block_items]
        + [it[2] for it in block_items]
    )
    block_order = prefix_balanced_order(block_items, block_bound)
    ordered_blocks = [blocks[r] for r in block_order]

    stats = []
    for b in ordered_blocks:
        cells = [records[it[0]] for it in b.items]
        stats.append(
            (
                sum(len(r.alg_disks) for r in cells),
                sum(it[2] for it in b.items),
                sum(r.pstar_count for r in cells),
                sum(r.palg_count for r in cells),
            )
        )
    choice = select_group(stats, cfg.kappa, cfg.extend)
    if choice is None:
        if cfg.scaled_mode:
            return Swap(
                s_old=list(range(len(state.disks))),
                s_new=internal_opt + dummies,
                branch=Branch.FEW_BLOCKS_SWAP_ALL,
            )
        raise EngineInvariantError("no qualifying group found")

    lo, hi = choice.group
    es, ee = choice.extension
    s_old: list[int] = []
    for b in ordered_blocks[lo:hi] + ordered_blocks[es:ee]:
        for it in b.items:
            s_old.extend(records[it[0]].alg_disks)
    s_new: list[UnitDisk] = []
    for b in ordered_blocks[lo:hi]:
        for it in b.items:
            cell = it[0]
            s_new.extend(opt_sol.disks[k] for k in records[cell].opt_disks)
            if cell in dummy_cells:
                s_new.append(dummy_cells[cell])
    s_old = sorted(set(s_old))
    if len(s_new) > len(s_old):
        if cfg.scaled_mode:
            return Swap(
                s_old=list(range(len(state.disks))),
                s_new=internal_opt + dummies,
                branch=Branch.FEW_BLOCKS_SWAP_ALL,
            )
        raise EngineInvariantError("replacement larger than removal set")
    return Swap(s_old=s_old, s_new=s_new, branch=Branch.GROUP_SWAP)


def apply_event(state: EngineState, op: str, p: Point) -> None:
    """Mutate the point set and keep the assignment consistent."""
    if op == "insert":
        if p in state.points:
            raise StreamError(f"insert of already-present point {p}")
        state.points.add(p)
        for i, d in enumerate(state.disks):
            if covers(d, p):
                state.assignment[p] = i
                break
    elif op == "delete":
        if p not in state.points:
            raise StreamError(f"delete of absent point {p}")
        state.points.remove(p)
        state.assignment.pop(p, None)
    else:
        raise StreamError(f"unknown operation {op!r}")


def apply_swap(state: EngineState, swap: Swap) -> int:
    """Replace the swap's old disks, pad back to m, recount; returns churn."""
    cfg = state.config
    old = list(state.disks)
    removed = set(swap.s_old)
    keep = [d for i, d in enumerate(old) if i not in removed]
    new_disks = keep + list(swap.s_new)
    deficit = cfg.m - len(new_disks)
    if deficit > 0:
        base = min(
            [d.center.y for d in old + swap.s_new]
            + [p.y for p in state.points]
        )
        new_disks += [
            UnitDisk(Point(0.0, base - 10.0 - 3.0 * i)) for i in range(deficit)
        ]
    assert len(new_disks) == cfg.m
    prev_value = state.alg_value
    state.disks = new_disks
    state.assignment = assign_points(state.points, state.disks)
    if state.alg_value < prev_value + 1:
        raise EngineInvariantError(
            f"swap did not increase coverage: {prev_value} -> {state.alg_value}"
        )
    return _multiset_churn(old, new_disks)


def update(state: EngineState, op: str, p: Point) -> UpdateReport:
    """One dynamic update; repairs the solution only when the ratio check fails."""
    cfg = state.config
    state.t += 1
    apply_event(state, op, p)
    cur = state.alg_value
    opt_sol = solve(state.points, cfg.m, cfg.solver, cfg.node_budget)

    if opt_sol.value <= (1.0 + cfg.epsilon) * cur:
        churn = 0
        branch = Branch.NO_CHANGE
    elif cfg.m <= cfg.trivial_threshold:
        swap = _swap_everything(state, opt_sol.disks, Branch.TRIVIAL_SWAP_ALL)
        churn = apply_swap(state, swap)
        branch = swap.branch
    else:
        swap = find_valid_swap(state, opt_sol)
        churn = apply_swap(state, swap)
        branch = swap.branch

    assert len(state.disks) == cfg.m
    if opt_sol.value > (1.0 + cfg.epsilon) * state.alg_value:
        raise EngineInvariantError(
            f"approximation ratio violated at t={state.t}: "
            f"opt={opt_sol.value} alg={state.alg_value}"
        )
    if churn > cfg.churn_bound(branch):
        raise EngineInvariantError(
            f"churn {churn} exceeds bound {cfg.churn_bound(branch)} on {branch}"
        )
    return UpdateReport(
        t=state.t,
        op=op,
        alg_value=state.alg_value,
        opt_value=opt_sol.value,
        churn=churn,
        branch=branch,
    )
