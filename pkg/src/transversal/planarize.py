"""Planarisation: add a vertex at every edge crossing and split edges there."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .geom import IntersectionKind, Point, SegmentQ, segment_intersection
from .graph import GeometricGraph

SNAP = 1e-12


class PlanarizationError(ValueError):
    pass


class OverlappingEdgesError(PlanarizationError):
    def __init__(self, a: int, b: int):
        self.pair = (a, b)
        super().__init__(f"edges {a} and {b} overlap collinearly")


@dataclass(frozen=True)
class Crossing:
    edge_a: int
    edge_b: int
    point: Point


@dataclass(frozen=True)
class Touch:
    """Endpoint ``vertex`` of some edge lying inside edge ``edge``."""

    edge: int
    vertex: int


@dataclass(frozen=True)
class PlanarGraph:
    points: np.ndarray  # (n', 2)
    is_crossing: np.ndarray  # (n',) bool
    edges: np.ndarray  # (m', 2)
    source_edge: np.ndarray  # (m',) original edge id per sub-edge
    chains: list  # original edge id -> ordered sub-edge ids
    crossings: list
    name: str = "planar"

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def m(self) -> int:
        return len(self.edges)

    def as_graph(self) -> GeometricGraph:
        return GeometricGraph(self.points, self.edges, self.name)


def _candidate_pairs(g: GeometricGraph) -> np.ndarray:
    """Edge pairs whose bounding boxes overlap, by a sweep over x."""
    if g.m < 2:
        return np.empty((0, 2), dtype=np.int64)
    p = g.points[g.edges[:, 0]]
    q = g.points[g.edges[:, 1]]
    lo = np.minimum(p, q)
    hi = np.maximum(p, q)
    order = np.argsort(lo[:, 0], kind="stable")
    xs = lo[order, 0]
    # window end: last edge whose xmin <= this edge's xmax
    stop = np.searchsorted(xs, hi[order, 0], side="right")
    out = []
    for k in range(len(order)):
        if stop[k] <= k + 1:
            continue
        i = order[k]
        js = order[k + 1 : stop[k]]
        ok = (lo[js, 1] <= hi[i, 1]) & (hi[js, 1] >= lo[i, 1])
        js = js[ok]
        if len(js):
            out.append(np.column_stack([np.full(len(js), i), js]))
    if not out:
        return np.empty((0, 2), dtype=np.int64)
    pairs = np.vstack(out)
    return np.sort(pairs, axis=1)


def _all_pairs(g: GeometricGraph) -> np.ndarray:
    i, j = np.triu_indices(g.m, 1)
    return np.column_stack([i, j])


_BOUND = 3.3306690738754716e-16


def _certain_sign(p, q, s) -> np.ndarray:
    """Row-wise orientation sign where the float filter is conclusive, else 0."""
    acx = p[:, 0] - s[:, 0]
    bcx = q[:, 0] - s[:, 0]
    acy = p[:, 1] - s[:, 1]
    bcy = q[:, 1] - s[:, 1]
    left = acx * bcy
    right = acy * bcx
    det = left - right
    sure = np.abs(det) > _BOUND * (np.abs(left) + np.abs(right))
    return np.where(sure, np.sign(det), 0).astype(np.int8)


def _prefilter(g: GeometricGraph, pairs: np.ndarray) -> np.ndarray:
    """Drop pairs that are certainly disjoint."""
    if len(pairs) == 0:
        return pairs
    E, P = g.edges, g.points
    a, b = P[E[pairs[:, 0], 0]], P[E[pairs[:, 0], 1]]
    c, d = P[E[pairs[:, 1], 0]], P[E[pairs[:, 1], 1]]
    o1, o2 = _certain_sign(a, b, c), _certain_sign(a, b, d)
    o3, o4 = _certain_sign(c, d, a), _certain_sign(c, d, b)
    apart = (o1.astype(np.int16) * o2 > 0) | (o3.astype(np.int16) * o4 > 0)
    return pairs[~apart]


def _classify(g: GeometricGraph, pairs: np.ndarray):
    crossings: list[Crossing] = []
    touches: set[Touch] = set()
    E = g.edges
    P = g.points
    pairs = _prefilter(g, pairs)
    for a, b in pairs.tolist():
        ua, va = E[a]
        ub, vb = E[b]
        res = segment_intersection(
            SegmentQ(Point(*P[ua]), Point(*P[va])), SegmentQ(Point(*P[ub]), Point(*P[vb]))
        )
        if res.kind is IntersectionKind.OVERLAPPING:
            raise OverlappingEdgesError(a, b)
        if res.kind is IntersectionKind.PROPER:
            crossings.append(Crossing(a, b, res.point))
        elif res.kind is IntersectionKind.TOUCHING:
            shared = {ua, va} & {ub, vb}
            if shared:
                continue
            t = tuple(res.point)
            for e, ends, other in ((a, (ua, va), (ub, vb)), (b, (ub, vb), (ua, va))):
                for v in other:
                    if tuple(P[v]) == t and v not in ends:
                        touches.add(Touch(e, int(v)))
    crossings.sort(key=lambda c: (c.edge_a, c.edge_b))
    return crossings, sorted(touches, key=lambda t: (t.edge, t.vertex))


def find_crossings(g: GeometricGraph, brute_force: Optional[bool] = None) -> list[Crossing]:
    """All proper pairwise crossings, sorted by (edge_a, edge_b).

    Edges sharing an endpoint are never reported; collinear overlaps raise
    :class:`OverlappingEdgesError`.
    """
    if brute_force is None:
        brute_force = g.m <= 64
    pairs = _all_pairs(g) if brute_force else _candidate_pairs(g)
    return _classify(g, pairs)[0]


def find_touches(g: GeometricGraph) -> list[Touch]:
    return _classify(g, _candidate_pairs(g))[1]


def planarize(g: GeometricGraph) -> PlanarGraph:
    """Split every edge at its crossings (and at vertices lying on it)."""
    crossings, touches = _classify(g, _candidate_pairs(g) if g.m > 64 else _all_pairs(g))
    P = g.points
    E = g.edges

    # union-find over crossings sharing an edge at (numerically) one point
    parent = list(range(len(crossings)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    on_edge: dict[int, list[tuple[float, int]]] = {}
    for ci, c in enumerate(crossings):
        for e in (c.edge_a, c.edge_b):
            u, v = E[e]
            d = P[v] - P[u]
            t = float(np.dot(np.asarray(c.point) - P[u], d) / np.dot(d, d))
            on_edge.setdefault(e, []).append((t, ci))
    for e, items in on_edge.items():
        items.sort()
        length = math.hypot(*(P[E[e][1]] - P[E[e][0]]))
        for (t0, c0), (t1, c1) in zip(items, items[1:]):
            if (t1 - t0) * length <= SNAP:
                parent[find(c1)] = find(c0)

    groups: dict[int, list[int]] = {}
    for ci in range(len(crossings)):
        groups.setdefault(find(ci), []).append(ci)
    points = [tuple(p) for p in P.tolist()]
    is_crossing = [False] * len(points)
    vertex_of: dict[int, int] = {}
    for root in sorted(groups, key=lambda r: min(groups[r])):
        members = groups[root]
        xy = np.mean([crossings[c].point for c in members], axis=0)
        vid = len(points)
        points.append((float(xy[0]), float(xy[1])))
        is_crossing.append(True)
        for c in members:
            vertex_of[c] = vid

    splits: dict[int, set[int]] = {}
    for ci, c in enumerate(crossings):
        for e in (c.edge_a, c.edge_b):
            splits.setdefault(e, set()).add(vertex_of[ci])
    for t in touches:
        splits.setdefault(t.edge, set()).add(t.vertex)

    pts = np.array(points, dtype=float).reshape(-1, 2)
    edges: list[tuple[int, int]] = []
    source: list[int] = []
    chains: list[list[int]] = []
    for e, (u, v) in enumerate(E.tolist()):
        inner = splits.get(e, ())
        d = pts[v] - pts[u]
        seq = [u] + sorted(inner, key=lambda w: float(np.dot(pts[w] - pts[u], d))) + [v]
        chain = []
        for a, b in zip(seq, seq[1:]):
            chain.append(len(edges))
            edges.append((a, b))
            source.append(e)
        chains.append(chain)

    if len({(x, y) for x, y in points}) != len(points):
        raise PlanarizationError("a crossing vertex coincides with an existing vertex")
    edge_arr = np.array(edges, dtype=np.int64).reshape(-1, 2)
    pg = PlanarGraph(
        points=pts,
        is_crossing=np.array(is_crossing, dtype=bool),
        edges=edge_arr,
        source_edge=np.array(source, dtype=np.int64),
        chains=chains,
        crossings=crossings,
        name=g.name,
    )
    # the rounded crossing coordinates must not introduce new crossings
    left, still = _classify(pg.as_graph(), _candidate_pairs(pg.as_graph()))
    if left or still:
        raise PlanarizationError(
            f"planarisation left {len(left)} crossings and {len(still)} touches after rounding"
        )
    return pg
