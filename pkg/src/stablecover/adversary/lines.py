"""Exact point/line incidence over the rationals.

A graph is drawn with vertices on a cubic curve and edges as infinite lines;
the drawing is verified exactly so that three-or-more-line concurrences occur
only at vertex points and no point lies on five lines.  Floating point is
forbidden in this module: concurrency counts are the whole point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

RationalPoint = tuple[Fraction, Fraction]


class SparseLineRepError(Exception):
    """Could not place the vertices sparsely within the retry budget."""


@dataclass(frozen=True, order=True)
class RationalLine:
    """a*x + b*y + c = 0 with coprime integer coefficients, first nonzero > 0."""

    a: int
    b: int
    c: int

    @staticmethod
    def normalized(a: Fraction, b: Fraction, c: Fraction) -> "RationalLine":
        if a == 0 and b == 0:
            raise ValueError("not a line: both direction coefficients are zero")
        den = a.denominator * b.denominator * c.denominator
        ia, ib, ic = (int(v * den) for v in (a, b, c))
        g = gcd(gcd(abs(ia), abs(ib)), abs(ic))
        ia, ib, ic = ia // g, ib // g, ic // g
        lead = ia if ia != 0 else ib
        if lead < 0:
            ia, ib, ic = -ia, -ib, -ic
        return RationalLine(ia, ib, ic)

    @staticmethod
    def through(p: RationalPoint, q: RationalPoint) -> "RationalLine":
        if p == q:
            raise ValueError("need two distinct points")
        a = p[1] - q[1]
        b = q[0] - p[0]
        c = p[0] * q[1] - q[0] * p[1]
        return RationalLine.normalized(a, b, c)

    def contains(self, p: RationalPoint) -> bool:
        return self.a * p[0] + self.b * p[1] + self.c == 0


def line_intersection(l1: RationalLine, l2: RationalLine) -> RationalPoint | None:
    det = l1.a * l2.b - l2.a * l1.b
    if det == 0:
        return None
    x = Fraction(l1.b * l2.c - l2.b * l1.c, det)
    y = Fraction(l2.a * l1.c - l1.a * l2.c, det)
    return (x, y)


@dataclass
class SparseLineRep:
    """Vertex points plus one line per edge, with verified sparse incidences."""

    positions: dict[int, RationalPoint]
    lines: dict[tuple[int, int], RationalLine]

    def line_list(self) -> list[RationalLine]:
        return [self.lines[e] for e in sorted(self.lines)]

    def restrict(self, edges: Iterable[tuple[int, int]]) -> "SparseLineRep":
        sub = {e: self.lines[_norm(e)] for e in map(_norm, edges)}
        verts = {v for e in sub for v in e}
        return SparseLineRep(
            positions={v: self.positions[v] for v in verts}, lines=sub
        )


def _norm(e: tuple[int, int]) -> tuple[int, int]:
    u, w = e
    return (u, w) if u < w else (w, u)


def concurrency_census(lines: Sequence[RationalLine]) -> dict[RationalPoint, set[int]]:
    """Map of every pairwise intersection point to the lines through it."""
    census: dict[RationalPoint, set[int]] = {}
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            pt = line_intersection(lines[i], lines[j])
            if pt is None:
                continue
            census.setdefault(pt, set()).update((i, j))
    return census


def verify_sparse(
    positions: dict[int, RationalPoint],
    lines: dict[tuple[int, int], RationalLine],
) -> int | None:
    """Return a vertex to perturb, or None when the drawing is sparse.

    Sparse means: all lines distinct; a vertex lies exactly on its incident
    lines; at most four lines through any point; three-plus concurrences only
    at vertex points.
    """
    edge_order = sorted(lines)
    line_seq = [lines[e] for e in edge_order]
    seen: dict[RationalLine, tuple[int, int]] = {}
    for e in edge_order:
        if lines[e] in seen:
            return max(e)
        seen[lines[e]] = e

    incident: dict[int, set[RationalLine]] = {v: set() for v in positions}
    for (u, w), ln in lines.items():
        incident[u].add(ln)
        incident[w].add(ln)
    for v, pos in positions.items():
        for ln in line_seq:
            on = ln.contains(pos)
            if on and ln not in incident[v]:
                return v
            if not on and ln in incident[v]:
                return v

    vertex_points = {pos: v for v, pos in positions.items()}
    for pt, through in concurrency_census(line_seq).items():
        if len(through) > 4:
            owner = vertex_points.get(pt)
            if owner is not None:
                return owner
            return max(v for i in through for v in edge_order[i])
        if len(through) >= 3 and pt not in vertex_points:
            return max(v for i in through for v in edge_order[i])
    return None


def sparse_line_rep(
    vertices: Sequence[int],
    edges: Iterable[tuple[int, int]],
    max_retries: int = 60,
) -> SparseLineRep:
    """Place vertices on the curve (r, r^3) and verify sparsity exactly.

    Positive ranks keep any three vertex points off a common line.  When some
    chords still meet badly, the offending vertex is nudged vertically by a
    small rational and verification reruns.
    """
    vertices = sorted(vertices)
    edge_list = sorted(_norm(e) for e in edges)
    rank = {v: i + 1 for i, v in enumerate(vertices)}
    positions: dict[int, RationalPoint] = {
        v: (Fraction(rank[v]), Fraction(rank[v] ** 3)) for v in vertices
    }
    bumps: dict[int, int] = {}
    for _ in range(max_retries):
        lines = {e: RationalLine.through(positions[e[0]], positions[e[1]]) for e in edge_list}
        culprit = verify_sparse(positions, lines)
        if culprit is None:
            return SparseLineRep(positions=positions, lines=lines)
        bumps[culprit] = bumps.get(culprit, 0) + 1
        r = rank[culprit]
        positions[culprit] = (
            Fraction(r),
            Fraction(r**3) + Fraction(bumps[culprit], 97),
        )
    raise SparseLineRepError(f"no sparse placement within {max_retries} retries")


def evaluate_hitting(
    points: Iterable[RationalPoint], lines: Sequence[RationalLine]
) -> int:
    """Exact count of lines incident to at least one of the points."""
    pts = list(points)
    return sum(1 for ln in lines if any(ln.contains(p) for p in pts))
