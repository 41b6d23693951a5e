"""Segment traversal and point location over the geodesic decomposition.

A query walks region to region along the line through its endpoints. Inside
a region the exit is found by binary search on each of its three chains,
where the side of a vertex relative to the query line changes at most twice.
Vertices exactly on the line count as lying to its right, so the walk never
has to branch at a vertex; this matches sending a query that starts along an
edge into the face on that edge's left.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from ..geom import Point, SegmentQ, cross_sign, crossing_point, orient, orient_rows, segments_cross
from .dcel import FRAME_EDGE, REAL, in_wedge, wedge_half_edge
from .geodesic import GeodesicStructure

SNAP = 1e-9
_T_SLACK = 1e-12


class OutsideFrameError(ValueError):
    pass


@dataclass(frozen=True)
class InsideFace:
    face: int
    deltoid: int


@dataclass(frozen=True)
class OnEdge:
    half_edge: int  # the even half-edge of the edge whose interior holds the point
    t: float = field(default=0.5, compare=False)  # position from the half-edge's origin, in (0, 1)


@dataclass(frozen=True)
class AtVertex:
    vertex: int


Locus = Union[InsideFace, OnEdge, AtVertex]


@dataclass
class TraversalResult:
    crossed_sub_edges: list  # planar sub-edge ids in order along the query
    crossing_points: list  # matching crossing points, increasing along the query
    triangle_steps: int
    end: Locus
    fallbacks: int = 0
    crossed_edges: list = field(default_factory=list)  # sorted distinct original edge ids


@dataclass(frozen=True)
class RayHit:
    half_edge: Optional[int]  # None when the ray leaves through the frame
    point: Point
    triangle_steps: int


class _Query:
    def __init__(self, gs: GeodesicStructure, a, b):
        self.gs = gs
        self.a = (float(a[0]), float(a[1]))
        self.b = (float(b[0]), float(b[1]))
        self.sign: dict[int, int] = {}
        self.fallbacks = 0

    def side(self, occ: int) -> int:
        s = self.sign.get(occ)
        if s is None:
            s = orient(self.a, self.b, self.gs.point(occ)) or -1
            self.sign[occ] = s
        return s

    def _g(self, c, i) -> int:
        P = self.gs.point
        return cross_sign(self.a, self.b, P(c[i]), P(c[i + 1]))

    def _mono(self, c, lo, hi, out):
        # side is monotone on c[lo..hi]: at most one change
        if self.side(c[lo]) == self.side(c[hi]):
            return
        s0 = self.side(c[lo])
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.side(c[mid]) == s0:
                lo = mid
            else:
                hi = mid
        out.append((c[lo], c[lo + 1]))

    def chain_changes(self, c, out):
        k = len(c) - 1
        if k < 1:
            return
        if k == 1:
            if self.side(c[0]) != self.side(c[1]):
                out.append((c[0], c[1]))
            return
        g0, gl = self._g(c, 0), self._g(c, k - 1)
        if g0 == 0 or gl == 0 or g0 == gl:
            self._mono(c, 0, k, out)
            return
        lo, hi = 0, k - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self._g(c, mid) == g0:
                lo = mid
            else:
                hi = mid
        self._mono(c, 0, hi, out)
        self._mono(c, hi, k, out)

    def t_of(self, u, w) -> float:
        P = self.gs.point
        pu, pw = P(u), P(w)
        dx, dy = self.b[0] - self.a[0], self.b[1] - self.a[1]
        ex, ey = pw[0] - pu[0], pw[1] - pu[1]
        den = dx * ey - dy * ex
        if den == 0.0:
            return math.inf
        return ((pu[0] - self.a[0]) * ey - (pu[1] - self.a[1]) * ex) / den

    def exit_edge(self, did: int, t_cur: float, skip) -> tuple:
        D = self.gs.deltoids[did]
        cands: list = []
        for k, side in enumerate(D.sides):
            if (did, k) in self.gs.wide_chains:
                self._scan(side, cands)
            else:
                self.chain_changes(side, cands)
        best = self._pick(cands, t_cur, skip)
        if best is None:
            self.fallbacks += 1
            cands = []
            for side in D.sides:
                self._scan(side, cands)
            best = self._pick(cands, t_cur, skip)
        if best is None:
            raise RuntimeError(f"query line has no exit from region {did}")
        return best

    def _scan(self, c, out):
        for u, w in zip(c, c[1:]):
            if self.side(u) != self.side(w):
                out.append((u, w))

    def _pick(self, cands, t_cur, skip):
        best = None
        for u, w in cands:
            if skip(u, w):
                continue
            t = self.t_of(u, w)
            # the line leaves the region only across edges running from its right to its left
            if self.side(u) > self.side(w):
                continue
            if t < t_cur - _T_SLACK * (1.0 + abs(t_cur)):
                continue
            if best is None or t < best[2]:
                best = (u, w, t)
        return best


def _start(gs: GeodesicStructure, start: Locus, a, b):
    """Region containing the start of the query and the edge test to skip."""
    d = gs.dcel
    direction = (b[0] - a[0], b[1] - a[1])
    if isinstance(start, InsideFace):
        return start.deltoid, lambda u, w: False
    if isinstance(start, AtVertex):
        h = wedge_half_edge(d, start.vertex, direction)
        tip = (a[0] + direction[0], a[1] + direction[1])
        pa = d.points[start.vertex]
        for did, prv, nxt in gs.corner_of.get(h, ()):
            if in_wedge(pa, gs.point(nxt), gs.point(prv), tip):
                return did, lambda u, w, h=h: u == h or w == h
        raise RuntimeError(f"no region at vertex {start.vertex} holds the query direction")
    if isinstance(start, OnEdge):
        h = start.half_edge
        pu, pw = d.points[d.origin[h]], d.points[d.origin[h ^ 1]]
        if cross_sign(pu, pw, a, b) <= 0:
            h ^= 1
        if d.face[h] == d.outer_face:
            raise OutsideFrameError("query starts on the frame and leaves it")
        key = (h, d.next[h])
        return gs.left_of[key], lambda u, w, key=key: (u, w) == key
    raise TypeError(f"unknown locus {start!r}")


def _march(gs: GeodesicStructure, start: Locus, a, b, stop_at_real: bool):
    d = gs.dcel
    q = _Query(gs, a, b)
    did, skip = _start(gs, start, a, b)
    t_cur = 0.0
    steps = 0
    crossed: list[int] = []
    points: list[Point] = []
    while True:
        steps += 1
        u, w, t = q.exit_edge(did, t_cur, skip)
        pu, pw = gs.point(u), gs.point(w)
        boundary = d.next[u] == w
        if not stop_at_real:
            o = orient(pu, pw, q.b)
            if o > 0:
                return (crossed, points), steps, _end_inside(gs, did, q.b), q.fallbacks
            if o == 0:
                return (crossed, points), steps, _end_on(gs, did, u, w, q.b), q.fallbacks
        if boundary:
            tag = d.tag[u]
            if tag == FRAME_EDGE:
                if stop_at_real:
                    return None, steps, _hit_point(q, t), q.fallbacks
                raise OutsideFrameError("query segment leaves the frame")
            if tag == REAL:
                if stop_at_real:
                    return u, steps, _hit_point(q, t), q.fallbacks
                if segments_cross(q.a, q.b, pu, pw):
                    crossed.append(d.sub_edge[u])
                    points.append(crossing_point(q.a, q.b, pu, pw))
            tw = u ^ 1
            key = (tw, d.next[tw])
        else:
            key = (w, u)
        did = gs.left_of[key]
        skip = lambda x, y, key=key: (x, y) == key
        t_cur = t


def _hit_point(q: _Query, t: float) -> Point:
    return Point(q.a[0] + t * (q.b[0] - q.a[0]), q.a[1] + t * (q.b[1] - q.a[1]))


def _end_on(gs: GeodesicStructure, did: int, u: int, w: int, p) -> Locus:
    d = gs.dcel
    for occ in (u, w):
        if tuple(gs.point(occ)) == p:
            return AtVertex(d.origin[occ])
    if d.next[u] == w:
        return on_edge(d, u, p)
    return InsideFace(gs.deltoids[did].face, did)


def _end_inside(gs: GeodesicStructure, did: int, p) -> Locus:
    # the end point may still sit on the region's boundary
    d = gs.dcel
    D = gs.deltoids[did]
    for u in D.cycle:
        if tuple(gs.point(u)) == p:
            return AtVertex(d.origin[u])
    for u, w in D.edges:
        pu, pw = gs.point(u), gs.point(w)
        if d.next[u] == w and orient(pu, pw, p) == 0 and _within(pu, pw, p):
            return on_edge(d, u, p)
    return InsideFace(D.face, did)


def on_edge(d, h: int, p) -> OnEdge:
    h &= ~1
    a, b = d.points[d.origin[h]], d.points[d.origin[h ^ 1]]
    dx, dy = b[0] - a[0], b[1] - a[1]
    return OnEdge(h, ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / (dx * dx + dy * dy))


def locus_point(d, locus: Locus) -> Optional[Point]:
    """Coordinates of a vertex or edge locus; None inside a face."""
    if isinstance(locus, AtVertex):
        return Point(*d.points[locus.vertex])
    if isinstance(locus, OnEdge):
        a, b = d.points[d.origin[locus.half_edge]], d.points[d.origin[locus.half_edge ^ 1]]
        return Point(a[0] + locus.t * (b[0] - a[0]), a[1] + locus.t * (b[1] - a[1]))
    return None


def _within(a, b, p) -> bool:
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def traverse_segment(gs: GeodesicStructure, start: Locus, q: SegmentQ, source_edge=None) -> TraversalResult:
    """Walk ``q`` from ``start`` (the locus of ``q.a``) and report crossed edges.

    A crossing is reported only where ``q`` and an edge cross properly;
    passing through a vertex or ending on an edge is not a crossing.
    """
    (crossed, points), steps, end, fb = _march(gs, start, q.a, q.b, stop_at_real=False)
    res = TraversalResult(crossed, points, steps, end, fb)
    if source_edge is not None:
        res.crossed_edges = sorted({int(source_edge[s]) for s in crossed})
    return res


def ray_shoot_in_face(gs: GeodesicStructure, locus: Locus, direction, origin=None) -> RayHit:
    """First real edge met by the ray leaving ``locus``; ``half_edge`` is None at the frame.

    Dummy and bridge edges are passed through. A locus inside a face carries
    no coordinates, so ``origin`` is required there.
    """
    norm = math.hypot(*direction)
    if norm == 0.0:
        raise ValueError("zero ray direction")
    if origin is None:
        origin = locus_point(gs.dcel, locus)
        if origin is None:
            raise ValueError("a locus inside a face needs an explicit origin")
    reach = 8.0 * max(abs(c) for p in gs.dcel.points for c in p) + 1.0
    far = (origin[0] + direction[0] / norm * reach, origin[1] + direction[1] / norm * reach)
    edge, steps, point, _ = _march(gs, locus, origin, far, stop_at_real=True)
    return RayHit(edge, point, steps)


def walk_locate(gs: GeodesicStructure, p, anchor: Optional[int] = None) -> Locus:
    """Locate ``p`` by walking to it from vertex ``anchor`` (default: a frame corner)."""
    d = gs.dcel
    if anchor is None:
        anchor = d.num_vertices - 4 if d.framed else min(range(d.num_vertices), key=lambda v: d.points[v])
    p = (float(p[0]), float(p[1]))
    if d.points[anchor] == p:
        return AtVertex(anchor)
    _, _, end, _ = _march(gs, AtVertex(anchor), d.points[anchor], p, stop_at_real=False)
    return _snap(gs, end, p)


def _snap(gs: GeodesicStructure, locus: Locus, p) -> Locus:
    d = gs.dcel
    if isinstance(locus, AtVertex):
        return locus
    if isinstance(locus, InsideFace):
        occs = gs.deltoids[locus.deltoid].cycle
        verts = [d.origin[o] for o in occs]
    else:
        verts = [d.origin[locus.half_edge], d.origin[locus.half_edge ^ 1]]
    for v in verts:
        x, y = d.points[v]
        if math.hypot(x - p[0], y - p[1]) <= SNAP:
            return AtVertex(v)
    return locus


class _BruteIndex:
    def __init__(self, gs: GeodesicStructure):
        d = gs.dcel
        self.P = np.asarray(d.points, dtype=float)
        keys = list(gs.left_of)
        self.keys = keys
        self.U = np.array([gs.point(u) for u, _ in keys], dtype=float).reshape(-1, 2)
        self.W = np.array([gs.point(w) for _, w in keys], dtype=float).reshape(-1, 2)
        self.owner = np.array([gs.left_of[k] for k in keys], dtype=np.int64)
        self.real = np.array([d.next[u] == w for u, w in keys], dtype=bool)


def locate_brute(gs: GeodesicStructure, p) -> Locus:
    """Point location by testing every region; the reference for the walk."""
    idx = getattr(gs, "_brute", None)
    if idx is None:
        idx = _BruteIndex(gs)
        gs._brute = idx
    d = gs.dcel
    p = (float(p[0]), float(p[1]))
    hit = np.nonzero((idx.P[:, 0] == p[0]) & (idx.P[:, 1] == p[1]))[0]
    if len(hit):
        return AtVertex(int(hit[0]))
    o = orient_rows(idx.U, idx.W, p)
    lo = np.minimum(idx.U, idx.W)
    hi = np.maximum(idx.U, idx.W)
    inbox = np.all(lo <= p, axis=1) & np.all(hi >= p, axis=1)
    on = np.nonzero((o == 0) & inbox)[0]
    if len(on):
        k = int(on[0])
        u, w = idx.keys[k]
        if idx.real[k]:
            return on_edge(d, u, p)
        did = gs.left_of[(u, w)]
        return InsideFace(gs.deltoids[did].face, did)
    # winding number per region
    up = (idx.U[:, 1] <= p[1]) & (idx.W[:, 1] > p[1]) & (o > 0)
    down = (idx.U[:, 1] > p[1]) & (idx.W[:, 1] <= p[1]) & (o < 0)
    wn = np.bincount(idx.owner, weights=up.astype(float) - down.astype(float), minlength=len(gs.deltoids))
    inside = np.nonzero(wn > 0.5)[0]
    if len(inside) == 0:
        raise OutsideFrameError(f"point {p} lies outside the frame")
    did = int(inside[0])
    return InsideFace(gs.deltoids[did].face, did)
