"""Doubly-connected edge list over a crossing-free planar graph.

Half-edges ``2k`` and ``2k + 1`` are twins. Outgoing half-edges around each
vertex are kept in counter-clockwise order; ``next(h)`` is the outgoing
half-edge at ``dest(h)`` that follows ``twin(h)`` clockwise, so every face
lies to the left of its boundary half-edges.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from ..geom import orient, orient_many, polygon_area, segments_cross_many
from ..graph import connected_components
from ..planarize import PlanarGraph

FRAME_HALF_SIDE = 2.0

# vertex kinds
ORIGINAL, CROSSING, FRAME = 0, 1, 2
# half-edge tags
REAL, FRAME_EDGE, BRIDGE = 0, 1, 2


class DisconnectedGraphError(ValueError):
    pass


class InvariantError(RuntimeError):
    """A structural invariant of the subdivision does not hold."""


@dataclass
class Dcel:
    points: list  # vertex id -> (x, y)
    vertex_kind: list
    origin: list  # half-edge -> origin vertex
    next: list
    prev: list
    face: list
    tag: list  # REAL / FRAME_EDGE / BRIDGE
    sub_edge: list  # half-edge -> planar sub-edge id, -1 for synthetic
    outgoing: list  # vertex -> CCW list of outgoing half-edges
    face_edge: list  # face -> one boundary half-edge
    outer_face: int
    name: str = "dcel"
    framed: bool = True
    _pos_in_out: dict = field(default_factory=dict, repr=False)

    @property
    def num_vertices(self) -> int:
        return len(self.points)

    @property
    def num_half_edges(self) -> int:
        return len(self.origin)

    @property
    def num_edges(self) -> int:
        return len(self.origin) // 2

    @property
    def num_faces(self) -> int:
        return len(self.face_edge)

    @staticmethod
    def twin(h: int) -> int:
        return h ^ 1

    def dest(self, h: int) -> int:
        return self.origin[h ^ 1]

    def synthetic(self, h: int) -> bool:
        return self.tag[h] != REAL

    def face_walk(self, f: int) -> list[int]:
        start = self.face_edge[f]
        walk = [start]
        h = self.next[start]
        while h != start:
            walk.append(h)
            h = self.next[h]
            if len(walk) > len(self.origin):
                raise InvariantError(f"face {f} boundary does not close")
        return walk

    def face_points(self, f: int) -> np.ndarray:
        return np.array([self.points[self.origin[h]] for h in self.face_walk(f)], dtype=float)

    def face_area(self, f: int) -> float:
        return polygon_area(self.face_points(f))

    def bounded_faces(self) -> list[int]:
        return [f for f in range(self.num_faces) if f != self.outer_face]

    def check(self) -> None:
        """Raise :class:`InvariantError` naming the first violated invariant."""
        H = self.num_half_edges
        for h in range(H):
            t = h ^ 1
            if t ^ 1 != h:
                raise InvariantError(f"twin(twin({h})) != {h}")
            if self.next[self.prev[h]] != h or self.prev[self.next[h]] != h:
                raise InvariantError(f"next/prev mismatch at half-edge {h}")
            if self.origin[t] != self.origin[self.next[h]]:
                raise InvariantError(f"origin(twin({h})) != destination({h})")
            if self.face[self.next[h]] != self.face[h]:
                raise InvariantError(f"face cycle broken at half-edge {h}")
        seen = 0
        for f in range(self.num_faces):
            seen += len(self.face_walk(f))
        if seen != H:
            raise InvariantError("face boundaries do not partition the half-edges")
        areas = [self.face_area(f) for f in range(self.num_faces)]
        if int(np.argmin(areas)) != self.outer_face or sum(a < 0 for a in areas) != 1:
            raise InvariantError("expected exactly one outer face with negative area")
        if self.euler() != 2:
            raise InvariantError(f"Euler characteristic is {self.euler()}, expected 2")

    def euler(self) -> int:
        return self.num_vertices - self.num_edges + self.num_faces


def _angle_key(points):
    def cmp(a, b):
        # a, b: (vertex, tip) pairs sharing the same base vertex
        base, ta = a
        _, tb = b
        pa, pb, pv = points[ta], points[tb], points[base]
        # exact half-plane test from coordinate comparisons
        ua = pa[1] > pv[1] or (pa[1] == pv[1] and pa[0] > pv[0])
        ub = pb[1] > pv[1] or (pb[1] == pv[1] and pb[0] > pv[0])
        if ua != ub:
            return -1 if ua else 1
        o = orient(pv, pa, pb)
        if o == 0:
            raise InvariantError(f"collinear overlapping edges at vertex {base}")
        return -1 if o > 0 else 1

    return functools.cmp_to_key(cmp)


def build_dcel(pg: PlanarGraph, frame: bool = True, join_components: bool = False) -> Dcel:
    """DCEL of ``pg``, optionally inside a square frame joined by one bridge edge.

    Disconnected input is rejected unless ``join_components`` is set, in
    which case each further component gets its own synthetic bridge to the
    nearest visible vertex to its lower left.
    """
    g = pg.as_graph()
    if g.n == 0:
        raise ValueError("empty planar graph")
    comps = connected_components(g)
    if len(comps) > 1 and not (frame and join_components):
        raise DisconnectedGraphError(
            f"graph has {len(comps)} connected components; build one subdivision per component"
            " or pass join_components=True"
        )
    points = [tuple(p) for p in g.points.tolist()]
    kind = [CROSSING if c else ORIGINAL for c in pg.is_crossing.tolist()]
    ends: list[tuple[int, int]] = [tuple(e) for e in g.edges.tolist()]
    tags = [REAL] * len(ends)
    subs = list(range(len(ends)))
    if frame:
        # (+-2, +-2) for unit-disk input, grown to enclose anything larger
        s = FRAME_HALF_SIDE * max(1.0, float(np.abs(g.points).max()))
        base = len(points)
        points += [(-s, -s), (s, -s), (s, s), (-s, s)]
        kind += [FRAME] * 4
        for j in range(4):
            ends.append((base + j, base + (j + 1) % 4))
            tags.append(FRAME_EDGE)
            subs.append(-1)
        lows = sorted((min(c, key=lambda v: points[v]) for c in comps), key=lambda v: points[v])
        # the leftmost component sees the lower-left corner directly
        ends.append((base, lows[0]))
        tags.append(BRIDGE)
        subs.append(-1)
        for v in lows[1:]:
            ends.append((_visible_smaller(points, ends, v), v))
            tags.append(BRIDGE)
            subs.append(-1)

    H = 2 * len(ends)
    origin = [0] * H
    tag = [0] * H
    sub_edge = [0] * H
    out: list[list[int]] = [[] for _ in points]
    for k, (u, v) in enumerate(ends):
        origin[2 * k], origin[2 * k + 1] = u, v
        tag[2 * k] = tag[2 * k + 1] = tags[k]
        sub_edge[2 * k] = sub_edge[2 * k + 1] = subs[k]
        out[u].append(2 * k)
        out[v].append(2 * k + 1)
    key = _angle_key(points)
    for v in range(len(points)):
        out[v].sort(key=lambda h: key((v, origin[h ^ 1])))
    pos = {}
    for v, hs in enumerate(out):
        for i, h in enumerate(hs):
            pos[h] = i

    nxt = [0] * H
    prv = [0] * H
    for h in range(H):
        t = h ^ 1
        v = origin[t]
        ring = out[v]
        nh = ring[pos[t] - 1]
        nxt[h] = nh
        prv[nh] = h

    face = [-1] * H
    face_edge: list[int] = []
    for h in range(H):
        if face[h] != -1:
            continue
        f = len(face_edge)
        face_edge.append(h)
        x = h
        while face[x] == -1:
            face[x] = f
            x = nxt[x]

    d = Dcel(points, kind, origin, nxt, prv, face, tag, sub_edge, out, face_edge, -1, pg.name, frame, pos)
    areas = [d.face_area(f) for f in range(d.num_faces)]
    d.outer_face = int(np.argmin(areas))
    return d


def _visible_smaller(points, ends, v) -> int:
    """Nearest lexicographically smaller vertex that ``v`` sees without obstruction."""
    P = np.asarray(points, dtype=float)
    E = np.asarray(ends, dtype=np.int64)
    pv = points[v]
    cand = [w for w in range(len(points)) if points[w] < pv]
    cand.sort(key=lambda w: ((P[w, 0] - pv[0]) ** 2 + (P[w, 1] - pv[1]) ** 2, w))
    for w in cand:
        pw = points[w]
        lo = np.minimum(pv, pw)
        hi = np.maximum(pv, pw)
        # a vertex on the open segment blocks it
        near = np.nonzero(np.all(P >= lo, axis=1) & np.all(P <= hi, axis=1))[0]
        near = near[(near != v) & (near != w)]
        if len(near) and np.any(orient_many(pv, pw, P[near]) == 0):
            continue
        if segments_cross_many(pv, pw, P[E[:, 0]], P[E[:, 1]]).any():
            continue
        return w
    raise InvariantError(f"no visible vertex to bridge from vertex {v}")


def wedge_half_edge(d: Dcel, v: int, direction) -> int:
    """Outgoing half-edge at ``v`` whose left face contains ``direction``.

    The wedge of outgoing half-edge ``e_k`` runs counter-clockwise from
    ``e_k`` (included) to ``e_{k+1}`` (excluded), so a direction along an
    edge picks the face on that edge's left.
    """
    ring = d.outgoing[v]
    p = d.points[v]
    tip = (p[0] + direction[0], p[1] + direction[1])
    if len(ring) == 1:
        return ring[0]
    for i, h in enumerate(ring):
        a = d.points[d.origin[h ^ 1]]
        b = d.points[d.origin[ring[(i + 1) % len(ring)] ^ 1]]
        if in_wedge(p, a, b, tip):
            return h
    raise InvariantError(f"no wedge at vertex {v} contains the direction")


def in_wedge(p, a, b, x) -> bool:
    """Is direction p->x in the CCW wedge [p->a, p->b)?"""
    if orient(p, a, x) == 0 and same_direction(p, a, x):
        return True
    if orient(p, b, x) == 0 and same_direction(p, b, x):
        return False
    oab, oa, ob = orient(p, a, b), orient(p, a, x), orient(p, b, x)
    if oab > 0:
        return oa > 0 and ob < 0
    if oab < 0:
        return oa > 0 or ob < 0
    if same_direction(p, a, b):
        return True  # a full turn
    return oa > 0  # a straight angle


def same_direction(p, a, x) -> bool:
    return (a[0] - p[0]) * (x[0] - p[0]) + (a[1] - p[1]) * (x[1] - p[1]) > 0
