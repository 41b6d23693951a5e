"""Balanced geodesic-triangle decomposition of the bounded faces.

Each bounded face is split by shortest paths (inside the face) between
boundary positions into regions bounded by three concave chains. Chains
are made of elementary edges between boundary occurrences; an occurrence
is identified by the half-edge leaving it, so every oriented elementary
edge has a global key ``(h_from, h_to)``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from ..geom import orient, polygon_area
from .dcel import Dcel, InvariantError
from .triangulate import triangulate_walk


@dataclass(frozen=True)
class Deltoid:
    id: int
    face: int
    sides: tuple  # three tuples of occurrence ids, each a concave chain
    cycle: tuple  # CCW boundary occurrences, each chain joint listed once

    @property
    def edges(self):
        c = self.cycle
        return [(c[i], c[(i + 1) % len(c)]) for i in range(len(c))]


@dataclass(frozen=True)
class GeodesicFace:
    face: int
    deltoids: tuple  # region ids, the root region first
    size: int  # length of the boundary walk


class FaceGeodesics:
    """Shortest paths between positions of one face walk."""

    def __init__(self, pts: np.ndarray):
        self.P = [tuple(map(float, p)) for p in pts]
        self.f = len(self.P)
        self.tris = triangulate_walk(pts)
        owner: dict[tuple[int, int], int] = {}
        for t, (a, b, c) in enumerate(self.tris):
            for e in ((a, b), (b, c), (c, a)):
                if e in owner:
                    raise InvariantError(f"helper edge {e} used twice in one orientation")
                owner[e] = t
        self.owner = owner
        self.occ_tri = {}
        for t, tri in enumerate(self.tris):
            for v in tri:
                self.occ_tri.setdefault(v, t)
        # dual tree rooted at triangle 0
        nt = len(self.tris)
        self.parent = [-1] * nt
        self.depth = [0] * nt
        seen = [False] * nt
        seen[0] = True
        stack = [0]
        while stack:
            t = stack.pop()
            a, b, c = self.tris[t]
            for u, w in ((a, b), (b, c), (c, a)):
                s = owner.get((w, u))
                if s is not None and not seen[s]:
                    seen[s] = True
                    self.parent[s] = t
                    self.depth[s] = self.depth[t] + 1
                    stack.append(s)
        if not all(seen):
            raise InvariantError("helper triangulation is not connected")

    def _tree_path(self, s: int, t: int) -> list[int]:
        front, back = [s], [t]
        while front[-1] != back[-1]:
            if self.depth[front[-1]] >= self.depth[back[-1]]:
                front.append(self.parent[front[-1]])
            else:
                back.append(self.parent[back[-1]])
        return front + back[-2::-1]

    def sleeve(self, i: int, j: int) -> list[int]:
        path = self._tree_path(self.occ_tri[i], self.occ_tri[j])
        k0 = max(k for k, t in enumerate(path) if i in self.tris[t])
        k1 = next(k for k in range(k0, len(path)) if j in self.tris[path[k]])
        return path[k0 : k1 + 1]

    def _portals(self, sl: list[int]) -> list[tuple[int, int]]:
        out = []
        for t, s in zip(sl, sl[1:]):
            a, b, c = self.tris[t]
            for u, w in ((a, b), (b, c), (c, a)):
                if self.owner.get((w, u)) == s:
                    # crossing u->w from its left side: w is on the traveller's left
                    out.append((w, u))
                    break
            else:
                raise InvariantError("sleeve triangles are not adjacent")
        return out

    def geodesic(self, i: int, j: int) -> list[int]:
        """Shortest path from position ``i`` to position ``j`` as a position list."""
        if i == j:
            return [i]
        sl = self.sleeve(i, j)
        if len(sl) == 1:
            return [i, j]
        portals = [(i, i)] + self._portals(sl) + [(j, j)]
        path = self._funnel(portals)
        corners = []
        for t in sl:
            for v in self.tris[t]:
                if v not in corners:
                    corners.append(v)
        return self._refine(path, corners)

    def _funnel(self, portals) -> list[int]:
        P = self.P
        apex = left = right = portals[0][0]
        ai = li = ri = 0
        path = [apex]
        k = 1
        while k < len(portals):
            L, R = portals[k]
            pa = P[apex]
            if orient(pa, P[right], P[R]) >= 0:
                if apex in (right, left) or orient(pa, P[left], P[R]) < 0:
                    right, ri = R, k
                else:
                    path.append(left)
                    apex, ai = left, li
                    left = right = apex
                    li = ri = ai
                    k = ai + 1
                    continue
            if orient(pa, P[left], P[L]) <= 0:
                if apex in (left, right) or orient(pa, P[right], P[L]) > 0:
                    left, li = L, k
                else:
                    path.append(right)
                    apex, ai = right, ri
                    left = right = apex
                    li = ri = ai
                    k = ai + 1
                    continue
            k += 1
        last = portals[-1][0]
        if path[-1] != last:
            path.append(last)
        return path

    def _refine(self, path: list[int], corners: list[int]) -> list[int]:
        """Insert sleeve positions lying on path segments, so edges are elementary."""
        P = self.P
        out = [path[0]]
        for u, w in zip(path, path[1:]):
            pu, pw = P[u], P[w]
            dx, dy = pw[0] - pu[0], pw[1] - pu[1]
            lo = (min(pu[0], pw[0]), min(pu[1], pw[1]))
            hi = (max(pu[0], pw[0]), max(pu[1], pw[1]))
            on: dict[tuple, int] = {}
            for v in corners:
                x = P[v]
                if x == pu or x == pw or x in on:
                    continue
                if lo[0] <= x[0] <= hi[0] and lo[1] <= x[1] <= hi[1] and orient(pu, pw, x) == 0:
                    on[x] = v
            for x in sorted(on, key=lambda x: (x[0] - pu[0]) * dx + (x[1] - pu[1]) * dy):
                out.append(on[x])
            out.append(w)
        return out


def _apex_index(a: list[int], b: list[int]) -> int:
    """Index in ``a`` of the last vertex shared by two paths leaving one start."""
    k = 0
    while k + 1 < len(a) and k + 1 < len(b) and a[k + 1] == b[k + 1]:
        k += 1
    return k


def triangle_corners(f: int) -> list[tuple[int, int, int]]:
    """Corner positions of the balanced decomposition of an f-gon (f - 2 triples)."""
    if f < 3:
        return []
    a, b, c = 0, f // 3, (2 * f) // 3
    out = [(a, b, c)]
    stack = [(a, b), (b, c), (c, f)]
    while stack:
        lo, hi = stack.pop()
        if hi - lo < 2:
            continue
        mid = (lo + hi) // 2
        out.append((lo, mid, hi % f))
        stack.append((lo, mid))
        stack.append((mid, hi))
    return out


@dataclass
class GeodesicStructure:
    dcel: Dcel
    deltoids: list = field(default_factory=list)
    left_of: dict = field(default_factory=dict)  # (h_from, h_to) -> deltoid id
    corner_of: dict = field(default_factory=dict)  # occurrence -> [(deltoid, prev, next)]
    faces: dict = field(default_factory=dict)  # face id -> GeodesicFace
    wide_chains: set = field(default_factory=set)  # (deltoid, side) turning by pi or more
    build_millis: float = 0.0

    def point(self, occ: int):
        return self.dcel.points[self.dcel.origin[occ]]

    def is_boundary(self, u: int, w: int) -> bool:
        return self.dcel.next[u] == w

    def dummy_edges(self) -> set:
        return {tuple(sorted(k)) for k in self.left_of if not self.is_boundary(*k) and not self.is_boundary(k[1], k[0])}

    def stats(self) -> dict:
        faces = self.dcel.bounded_faces()
        return {
            "faces": len(faces),
            "max_face_size": max((len(self.dcel.face_walk(f)) for f in faces), default=0),
            "dummy_edges": len(self.dummy_edges()),
            "build_millis": round(self.build_millis, 3),
        }

    def verify(self) -> None:
        """Raise :class:`InvariantError` if the decomposition is not a clean tiling."""
        d = self.dcel
        for f in d.bounded_faces():
            for h in d.face_walk(f):
                if (h, d.next[h]) not in self.left_of:
                    raise InvariantError(f"boundary half-edge {h} belongs to no region")
        for u, w in self.left_of:
            if self.is_boundary(u, w):
                continue
            if (w, u) not in self.left_of:
                raise InvariantError(f"dummy edge {(u, w)} has a region on one side only")
        areas: dict[int, float] = {}
        for D in self.deltoids:
            pts = [self.point(o) for o in D.cycle]
            areas[D.face] = areas.get(D.face, 0.0) + polygon_area(pts)
            for side in D.sides:
                for a, b, c in zip(side, side[1:], side[2:]):
                    if orient(self.point(a), self.point(b), self.point(c)) > 0:
                        raise InvariantError(f"chain of region {D.id} bends the wrong way at {b}")
        for f in d.bounded_faces():
            want = d.face_area(f)
            got = areas.get(f, 0.0)
            if abs(got - want) > 1e-9 * max(1.0, abs(want)):
                raise InvariantError(f"regions of face {f} cover area {got}, face has {want}")


def _add_face(gs: GeodesicStructure, f: int) -> None:
    d = gs.dcel
    walk = d.face_walk(f)
    fg = FaceGeodesics(np.array([d.points[d.origin[h]] for h in walk], dtype=float))
    cache: dict[tuple[int, int], list[int]] = {}

    def geo(i, j):
        key = (i, j)
        if key not in cache:
            if (j, i) in cache:
                cache[key] = cache[(j, i)][::-1]
            else:
                cache[key] = fg.geodesic(i, j)
        return cache[key]

    roots = []
    for x, y, z in triangle_corners(fg.f):
        pxy, pyz, pzx = geo(x, y), geo(y, z), geo(z, x)
        kx = _apex_index(pxy, pzx[::-1])
        ky = _apex_index(pyz, pxy[::-1])
        kz = _apex_index(pzx, pyz[::-1])
        s1 = pxy[kx : len(pxy) - ky]
        s2 = pyz[ky : len(pyz) - kz]
        s3 = pzx[kz : len(pzx) - kx]
        cyc = s1[:-1] + s2[:-1] + s3[:-1]
        if len(cyc) < 3 or polygon_area([fg.P[v] for v in cyc]) <= 0.0:
            continue
        did = len(gs.deltoids)
        sides = tuple(tuple(walk[v] for v in s) for s in (s1, s2, s3))
        occ = tuple(walk[v] for v in cyc)
        D = Deltoid(did, f, sides, occ)
        for k, e in enumerate(D.edges):
            if e in gs.left_of:
                raise InvariantError(f"elementary edge {e} bounds two regions on the same side")
            gs.left_of[e] = did
            gs.corner_of.setdefault(e[0], []).append((did, occ[k - 1], e[1]))
        gs.deltoids.append(D)
        roots.append(did)
        for k, side in enumerate(sides):
            if _turning(d, side) >= math.pi - 1e-9:
                gs.wide_chains.add((did, k))
    gs.faces[f] = GeodesicFace(f, tuple(roots), fg.f)


def _turning(d: Dcel, chain) -> float:
    pts = [d.points[d.origin[o]] for o in chain]
    total = 0.0
    for (x0, y0), (x1, y1), (x2, y2) in zip(pts, pts[1:], pts[2:]):
        a = math.atan2(y1 - y0, x1 - x0)
        b = math.atan2(y2 - y1, x2 - x1)
        total += abs((b - a + math.pi) % (2 * math.pi) - math.pi)
    return total


def geodesic_triangulate(d: Dcel) -> GeodesicStructure:
    """Split every bounded face of ``d`` into regions bounded by three concave chains."""
    t0 = time.perf_counter()
    gs = GeodesicStructure(d)
    for f in d.bounded_faces():
        _add_face(gs, f)
    gs.build_millis = (time.perf_counter() - t0) * 1000.0
    return gs

