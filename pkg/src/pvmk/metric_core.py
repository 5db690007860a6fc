"""Finite metric spaces, Lipschitz data, and the anchored unit Lipschitz ball.

Distances are exact rationals and every polytope statement is certified by
exact arithmetic.  The extreme points of

    L(anchor) = { f : f(anchor) = 0, |f(x) - f(y)| <= d(x,y) for all x,y }

make the supremum over 1-Lipschitz test functions a finite maximum, which
is what the transport and operator-metric layers consume.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    AsymmetricDistance,
    InputParseError,
    MetricAxiomError,
    NonzeroSelfDistance,
    SpaceTooLarge,
    TriangleViolation,
    ZeroDistanceDistinctPoints,
)
from .rationals import as_fraction, is_rational_sequence, rational_str

DEFAULT_VERTEX_CAP = 7


@dataclass(frozen=True)
class FiniteMetricSpace:
    point_ids: tuple[str, ...]
    dist: tuple[tuple[Fraction, ...], ...]
    coords: tuple[tuple[Fraction, ...], ...] | None
    diam: Fraction
    space_hash: str

    @property
    def n(self) -> int:
        return len(self.point_ids)

    def index(self, point_id: str) -> int:
        try:
            return self.point_ids.index(point_id)
        except ValueError:
            raise InputParseError(f"unknown point id {point_id!r}") from None

    def d(self, i: int, j: int) -> Fraction:
        return self.dist[i][j]


def _space_hash(ids, dist) -> str:
    text = ";".join(ids) + "|" + ",".join(rational_str(x) for row in dist for x in row)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _parse_table(dist_table, point_ids):
    n = len(dist_table)
    if point_ids is None:
        point_ids = tuple(f"p{i}" for i in range(n))
    else:
        point_ids = tuple(str(p) for p in point_ids)
    if len(point_ids) != n or len(set(point_ids)) != n:
        raise InputParseError("point ids must be unique and match the table size")
    rows = []
    for row in dist_table:
        if len(row) != n:
            raise InputParseError("distance table must be square")
        frow = tuple(as_fraction(x) for x in row)
        if any(x < 0 for x in frow):
            raise InputParseError("distances must be non-negative")
        rows.append(frow)
    return point_ids, tuple(rows)


def audit_space(dist_table, point_ids=None) -> list[MetricAxiomError]:
    """All metric-axiom violations of a table, each with witness ids."""
    ids, dist = _parse_table(dist_table, point_ids)
    n = len(ids)
    bad: list[MetricAxiomError] = []
    for i in range(n):
        if dist[i][i] != 0:
            bad.append(NonzeroSelfDistance(ids[i]))
    for i in range(n):
        for j in range(i + 1, n):
            if dist[i][j] != dist[j][i]:
                bad.append(AsymmetricDistance(ids[i], ids[j]))
            elif dist[i][j] == 0:
                bad.append(ZeroDistanceDistinctPoints(ids[i], ids[j]))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for k in range(n):
                if k in (i, j):
                    continue
                if dist[i][j] > dist[i][k] + dist[k][j]:
                    bad.append(TriangleViolation(ids[i], ids[k], ids[j]))
    return bad


def validate_space(
    dist_table,
    point_ids=None,
    coords=None,
    skip_triangle_scan: bool = False,
) -> FiniteMetricSpace:
    """Validated metric space from a distance table.

    Raises the first violated axiom (use :func:`audit_space` for the full
    list).  ``skip_triangle_scan`` is for constructions that are metrics by
    theorem (1-D coordinate distance, ultrametrics); symmetry and
    positivity are still enforced.
    """
    ids, dist = _parse_table(dist_table, point_ids)
    n = len(ids)
    for i in range(n):
        if dist[i][i] != 0:
            raise NonzeroSelfDistance(ids[i])
    for i in range(n):
        for j in range(i + 1, n):
            if dist[i][j] != dist[j][i]:
                raise AsymmetricDistance(ids[i], ids[j])
            if dist[i][j] == 0:
                raise ZeroDistanceDistinctPoints(ids[i], ids[j])
    if not skip_triangle_scan:
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                for k in range(n):
                    if k in (i, j):
                        continue
                    if dist[i][j] > dist[i][k] + dist[k][j]:
                        raise TriangleViolation(ids[i], ids[k], ids[j])
    if coords is not None:
        coords = tuple(tuple(as_fraction(c) for c in pt) for pt in coords)
        if len(coords) != n:
            raise InputParseError("coords must match the number of points")
    diam = max((x for row in dist for x in row), default=Fraction(0))
    return FiniteMetricSpace(ids, dist, coords, diam, _space_hash(ids, dist))


def lip_constant(values, space: FiniteMetricSpace):
    """Smallest K with |f(x) - f(y)| <= K d(x,y); exact when values are rational."""
    if len(values) != space.n:
        raise InputParseError("value vector must cover every point")
    exact = is_rational_sequence(values)
    best = Fraction(0) if exact else 0.0
    for i in range(space.n):
        for j in range(i + 1, space.n):
            d = space.dist[i][j]
            ratio = abs(values[i] - values[j]) / d
            if ratio > best:
                best = ratio
    return best


@dataclass(frozen=True)
class LipschitzFunction:
    """Point values together with a certified Lipschitz constant."""

    values: tuple
    constant: object  # Fraction or float, matching the values


def certify_lipschitz(space: FiniteMetricSpace, values) -> LipschitzFunction:
    vals = tuple(values)
    return LipschitzFunction(vals, lip_constant(vals, space))


@dataclass(frozen=True)
class Lip1VertexSet:
    """Extreme points of the anchored 1-Lipschitz polytope of one space."""

    anchor: str
    vertices: tuple[tuple[Fraction, ...], ...]
    space_hash: str

    def __len__(self) -> int:
        return len(self.vertices)


def lip1_vertices(
    space: FiniteMetricSpace,
    anchor: str | None = None,
    cap: int = DEFAULT_VERTEX_CAP,
) -> Lip1VertexSet:
    """Exact vertex list of {f : f(anchor) = 0, f 1-Lipschitz}.

    A vertex is a feasible point with n-1 linearly independent tight
    difference constraints; a set of difference constraints is independent
    exactly when its pair graph is a forest, so every vertex carries a
    spanning tree of tight edges.  The search below grows all such trees:
    states are partial assignments, each extension fixes a new point at
    value(u) +/- d(u, v) for an assigned u, and infeasible extensions are
    pruned.  Different growth orders of one tree collapse in the frontier
    set, and final assignments are deduplicated.
    """
    n = space.n
    if n > cap:
        raise SpaceTooLarge(n, cap)
    a0 = 0 if anchor is None else space.index(anchor)
    anchor_id = space.point_ids[a0]
    zero = Fraction(0)
    if n == 1:
        return Lip1VertexSet(anchor_id, ((zero,),), space.space_hash)
    d = space.dist
    frontier: set[tuple[tuple[int, Fraction], ...]] = {((a0, zero),)}
    for _ in range(n - 1):
        grown: set[tuple[tuple[int, Fraction], ...]] = set()
        for state in frontier:
            assigned = dict(state)
            for v in range(n):
                if v in assigned:
                    continue
                candidates = set()
                for u, uval in assigned.items():
                    candidates.add(uval + d[u][v])
                    candidates.add(uval - d[u][v])
                for val in candidates:
                    feasible = True
                    for w, wval in assigned.items():
                        if abs(val - wval) > d[v][w]:
                            feasible = False
                            break
                    if feasible:
                        grown.add(tuple(sorted(assigned.items() | {(v, val)})))
        frontier = grown
    verts = sorted({tuple(dict(state)[i] for i in range(n)) for state in frontier})
    for vert in verts:
        if lip_constant(vert, space) > 1:  # pragma: no cover - construction invariant
            raise MetricAxiomError("enumerated vertex exceeds Lipschitz constant 1")
    return Lip1VertexSet(anchor_id, tuple(verts), space.space_hash)


def mcshane(space: FiniteMetricSpace, values) -> tuple:
    """1-Lipschitz regularization f(x) = min_y (v(y) + d(x,y)) of raw values."""
    if len(values) != space.n:
        raise InputParseError("value vector must cover every point")
    return tuple(
        min(values[y] + space.dist[x][y] for y in range(space.n))
        for x in range(space.n)
    )
