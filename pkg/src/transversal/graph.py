"""Geometric graphs: storage, DIMACS/gg I/O, normalisation and generators."""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .geom import Point

log = logging.getLogger(__name__)


class GraphFormatError(ValueError):
    """Raised for malformed graph input; carries the 1-based line number."""

    def __init__(self, message: str, line: Optional[int] = None, source: str = ""):
        self.line = line
        if line is not None:
            where = f"{source}:{line}: "
        else:
            where = f"{source}: " if source else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class GeometricGraph:
    points: np.ndarray  # (n, 2) float
    edges: np.ndarray  # (m, 2) int, each row sorted u < v
    name: str = "graph"

    def __post_init__(self):
        pts = np.ascontiguousarray(np.asarray(self.points, dtype=float).reshape(-1, 2))
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        edges = np.ascontiguousarray(np.sort(edges, axis=1))
        n = len(pts)
        if not np.all(np.isfinite(pts)):
            raise ValueError("vertex coordinates must be finite")
        if len(edges):
            if edges.min() < 0 or edges.max() >= n:
                raise ValueError("edge index out of range")
            if np.any(edges[:, 0] == edges[:, 1]):
                raise ValueError("self-loop in edge list")
            if len(np.unique(edges, axis=0)) != len(edges):
                raise ValueError("duplicate edge in edge list")
        if len({(x, y) for x, y in pts.tolist()}) != n:
            raise ValueError("vertex points must be pairwise distinct")
        pts.setflags(write=False)
        edges.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "edges", edges)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def m(self) -> int:
        return len(self.edges)

    def point(self, i: int) -> Point:
        return Point(float(self.points[i, 0]), float(self.points[i, 1]))

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.n)

    def edge_lengths(self) -> np.ndarray:
        d = self.points[self.edges[:, 1]] - self.points[self.edges[:, 0]]
        return np.hypot(d[:, 0], d[:, 1])

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges.tolist():
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def transformed(self, translation, scale: float, name: Optional[str] = None) -> "GeometricGraph":
        pts = (self.points + np.asarray(translation, dtype=float)) * scale
        return GeometricGraph(pts, self.edges, name or self.name)

    def subgraph(self, vertices: Iterable[int], name: Optional[str] = None) -> "GeometricGraph":
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        edges = [(index[u], index[v]) for u, v in self.edges.tolist() if u in index and v in index]
        return GeometricGraph(self.points[keep], np.array(edges, dtype=np.int64).reshape(-1, 2), name or self.name)


@dataclass(frozen=True)
class GraphStats:
    n: int
    m: int
    max_degree: int
    total_edge_length: float
    component_count: int


@dataclass(frozen=True)
class NormalizationTransform:
    """Maps p to (p + translation) * scale."""

    translation: tuple[float, float]
    scale: float

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    def apply(self, p) -> Point:
        return Point((p[0] + self.translation[0]) * self.scale, (p[1] + self.translation[1]) * self.scale)

    def invert(self, p) -> Point:
        return Point(p[0] / self.scale - self.translation[0], p[1] / self.scale - self.translation[1])


# --------------------------------------------------------------------------
# parsing / serialisation
# --------------------------------------------------------------------------


def _number(tok: str, lineno: int, source: str) -> float:
    try:
        return float(int(tok))
    except ValueError:
        pass
    try:
        v = float(tok)
    except ValueError:
        raise GraphFormatError(f"not a number: {tok!r}", lineno, source) from None
    if not math.isfinite(v):
        raise GraphFormatError(f"non-finite coordinate {tok!r}", lineno, source)
    return v


def parse_dimacs(coordinate_text: str, arc_text: str, name: str = "dimacs") -> GeometricGraph:
    """Build an undirected graph from DIMACS ``.co`` and ``.gr`` text.

    Reverse and repeated arcs collapse into one edge and weights are
    dropped. Distinct ids that share a coordinate are merged into one
    vertex, and arcs that become loops are discarded.
    """
    ids: dict[str, int] = {}
    coords: list[tuple[float, float]] = []
    for lineno, raw in enumerate(coordinate_text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] in "cp":
            continue
        toks = line.split()
        if toks[0] != "v" or len(toks) != 4:
            raise GraphFormatError(f"expected 'v <id> <x> <y>', got {line!r}", lineno, "coordinates")
        if toks[1] in ids:
            raise GraphFormatError(f"duplicate vertex id {toks[1]}", lineno, "coordinates")
        ids[toks[1]] = len(coords)
        coords.append((_number(toks[2], lineno, "coordinates"), _number(toks[3], lineno, "coordinates")))

    # merge coincident coordinates onto the first id that used them
    canon: dict[tuple[float, float], int] = {}
    remap: list[int] = []
    points: list[tuple[float, float]] = []
    for xy in coords:
        if xy not in canon:
            canon[xy] = len(points)
            points.append(xy)
        remap.append(canon[xy])
    if len(points) != len(coords):
        log.warning("%s: merged %d coincident vertices", name, len(coords) - len(points))

    seen: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(arc_text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] in "cp":
            continue
        toks = line.split()
        if toks[0] != "a" or len(toks) not in (3, 4):
            raise GraphFormatError(f"expected 'a <u> <v> <w>', got {line!r}", lineno, "arcs")
        try:
            u, v = ids[toks[1]], ids[toks[2]]
        except KeyError as exc:
            raise GraphFormatError(f"arc references unknown vertex id {exc.args[0]}", lineno, "arcs") from None
        if len(toks) == 4:
            _number(toks[3], lineno, "arcs")
        u, v = remap[u], remap[v]
        if u == v:
            continue
        key = (u, v) if u < v else (v, u)
        if key not in seen:
            seen.add(key)
            edges.append(key)
    return GeometricGraph(np.array(points, dtype=float).reshape(-1, 2), np.array(edges, dtype=np.int64).reshape(-1, 2), name)


def read_dimacs(co_path, gr_path, name: Optional[str] = None) -> GeometricGraph:
    co_path, gr_path = Path(co_path), Path(gr_path)
    return parse_dimacs(co_path.read_text(), gr_path.read_text(), name or co_path.stem)


def serialize_gg(g: GeometricGraph) -> str:
    lines = [f"gg {g.n} {g.m}"]
    lines += [f"{x!r} {y!r}" for x, y in g.points.tolist()]
    lines += [f"{u} {v}" for u, v in g.edges.tolist()]
    return "\n".join(lines) + "\n"


def parse_gg(text: str, name: str = "graph", source: str = "") -> GeometricGraph:
    rows = text.splitlines()
    if not rows:
        raise GraphFormatError("empty gg document", 1, source)
    head = rows[0].split()
    if len(head) != 3 or head[0] != "gg":
        raise GraphFormatError("expected header 'gg <n> <m>'", 1, source)
    try:
        n, m = int(head[1]), int(head[2])
    except ValueError:
        raise GraphFormatError("bad header counts", 1, source) from None
    if len(rows) < 1 + n + m:
        raise GraphFormatError(f"expected {n} vertex and {m} edge lines", len(rows), source)
    pts = []
    for i in range(1, 1 + n):
        toks = rows[i].split()
        if len(toks) != 2:
            raise GraphFormatError("expected '<x> <y>'", i + 1, source)
        pts.append((_number(toks[0], i + 1, source), _number(toks[1], i + 1, source)))
    edges = []
    for i in range(1 + n, 1 + n + m):
        toks = rows[i].split()
        if len(toks) != 2:
            raise GraphFormatError("expected '<u> <v>'", i + 1, source)
        try:
            edges.append((int(toks[0]), int(toks[1])))
        except ValueError:
            raise GraphFormatError("edge indices must be integers", i + 1, source) from None
    try:
        return GeometricGraph(np.array(pts, dtype=float).reshape(-1, 2), np.array(edges, dtype=np.int64).reshape(-1, 2), name)
    except ValueError as exc:
        raise GraphFormatError(str(exc), source=source) from None


def load_graph(path, arcs=None) -> GeometricGraph:
    """Load ``.gg`` directly, or a ``.co`` file paired with its ``.gr`` sibling."""
    path = Path(path)
    if path.suffix == ".co":
        gr = Path(arcs) if arcs else path.with_suffix(".gr")
        return read_dimacs(path, gr)
    return parse_gg(path.read_text(), path.stem, str(path))


# --------------------------------------------------------------------------
# analysis
# --------------------------------------------------------------------------


def connected_components(g: GeometricGraph) -> list[list[int]]:
    """Vertex sets by connectivity, each sorted, ordered by smallest member."""
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges.tolist():
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    groups: dict[int, list[int]] = {}
    for v in range(g.n):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values(), key=lambda c: c[0])


def graph_stats(g: GeometricGraph) -> GraphStats:
    deg = g.degrees()
    return GraphStats(
        n=g.n,
        m=g.m,
        max_degree=int(deg.max()) if g.n else 0,
        total_edge_length=float(g.edge_lengths().sum()) if g.m else 0.0,
        component_count=len(connected_components(g)),
    )


def _circle_two(a, b):
    cx, cy = (a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0
    return cx, cy, math.hypot(a[0] - cx, a[1] - cy)


def _circle_three(a, b, c):
    ax, ay = a
    bx, by = b
    cx, cy = c
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if d == 0.0:
        # collinear: widest pair
        pairs = [_circle_two(a, b), _circle_two(a, c), _circle_two(b, c)]
        return max(pairs, key=lambda t: t[2])
    a2, b2, c2 = ax * ax + ay * ay, bx * bx + by * by, cx * cx + cy * cy
    ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d
    uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d
    return ux, uy, max(math.hypot(p[0] - ux, p[1] - uy) for p in (a, b, c))


def _inside(circle, p, slack=1e-12) -> bool:
    cx, cy, r = circle
    return math.hypot(p[0] - cx, p[1] - cy) <= r * (1.0 + slack) + slack


def minimal_enclosing_circle(points, seed: int = 0) -> tuple[float, float, float]:
    """Welzl's algorithm (iterative move-to-front form) on a shuffled copy."""
    pts = [(float(x), float(y)) for x, y in np.asarray(points, dtype=float).tolist()]
    if not pts:
        raise ValueError("no points")
    random.Random(seed).shuffle(pts)
    c = (pts[0][0], pts[0][1], 0.0)
    for i in range(1, len(pts)):
        if _inside(c, pts[i]):
            continue
        c = (pts[i][0], pts[i][1], 0.0)
        for j in range(i):
            if _inside(c, pts[j]):
                continue
            c = _circle_two(pts[i], pts[j])
            for k in range(j):
                if not _inside(c, pts[k]):
                    c = _circle_three(pts[i], pts[j], pts[k])
    return c


def normalize_to_unit_disk(g: GeometricGraph) -> tuple[GeometricGraph, NormalizationTransform]:
    """Translate and scale ``g`` so its minimal enclosing disk is the unit disk."""
    if g.n == 0:
        raise ValueError("cannot normalise an empty graph")
    cx, cy, r = minimal_enclosing_circle(g.points)
    scale = 1.0 / r if r > 0 else 1.0
    tf = NormalizationTransform((-cx, -cy), scale)
    return g.transformed(tf.translation, tf.scale), tf


# --------------------------------------------------------------------------
# generators
# --------------------------------------------------------------------------


def gen_grid(k: int) -> GeometricGraph:
    if k < 2:
        raise ValueError("grid needs k >= 2")
    ii, jj = np.meshgrid(np.arange(k), np.arange(k), indexing="ij")
    pts = np.column_stack([ii.ravel(), jj.ravel()]).astype(float)
    idx = np.arange(k * k).reshape(k, k)
    horiz = np.column_stack([idx[:-1, :].ravel(), idx[1:, :].ravel()])
    vert = np.column_stack([idx[:, :-1].ravel(), idx[:, 1:].ravel()])
    return GeometricGraph(pts, np.vstack([horiz, vert]), f"grid:{k}")


def gen_nested_squares(s: int) -> GeometricGraph:
    """``s`` concentric axis-aligned squares with half-sides 1 + i/(2s)."""
    if s < 1:
        raise ValueError("need at least one square")
    delta = 1.0 / (2 * s)
    pts, edges = [], []
    for i in range(s):
        h = 1.0 + i * delta
        base = len(pts)
        pts += [(-h, -h), (h, -h), (h, h), (-h, h)]
        edges += [(base + j, base + (j + 1) % 4) for j in range(4)]
    return GeometricGraph(np.array(pts), np.array(edges), f"nested:{s}")


@dataclass(frozen=True)
class CounterExample:
    graph: GeometricGraph
    centers: np.ndarray
    radii: np.ndarray
    hubs: list[int] = field(default_factory=list)

    @property
    def disks(self):
        from .disks import DiskSystem  # disks imports this module

        return DiskSystem(self.centers, self.radii)

    def __iter__(self):
        # unpacks as (graph, disk system)
        return iter((self.graph, self.disks))


def gen_counterexample(n_target: int, epsilon: float = 0.1) -> CounterExample:
    """Hub clique of unit disks on a circle of radius 1 - epsilon plus degree-one leaves.

    Leaves of hub i lie on a circle of radius ``epsilon/4`` about the hub;
    leaf radii are ``epsilon/16``, shrunk when a hub carries so many
    leaves that the disks would otherwise touch.
    """
    if n_target < 16:
        raise ValueError("counter-example needs n_target >= 16")
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    k = math.ceil(math.sqrt(n_target))
    leaves = n_target - k
    ring = 1.0 - epsilon
    ang = 2.0 * math.pi * np.arange(k) / k
    hubs = np.column_stack([ring * np.cos(ang), ring * np.sin(ang)])
    per_hub = [leaves // k + (1 if i < leaves % k else 0) for i in range(k)]
    # keep leaf clusters of neighbouring hubs apart
    spacing = 2.0 * ring * math.sin(math.pi / k)
    orbit = min(epsilon / 4.0, spacing / 4.0)
    max_per = max(per_hub) if per_hub else 0
    leaf_r = epsilon / 16.0
    if max_per > 1:
        leaf_r = min(leaf_r, 0.45 * orbit * math.sin(math.pi / max_per))
    leaf_r = min(leaf_r, 0.45 * orbit)
    pts = [tuple(h) for h in hubs.tolist()]
    radii = [1.0] * k
    edges = [(i, j) for i in range(k) for j in range(i + 1, k)]
    for i in range(k):
        for j in range(per_hub[i]):
            a = 2.0 * math.pi * j / per_hub[i] + ang[i]
            pts.append((hubs[i, 0] + orbit * math.cos(a), hubs[i, 1] + orbit * math.sin(a)))
            radii.append(leaf_r)
            edges.append((i, len(pts) - 1))
    g = GeometricGraph(np.array(pts), np.array(edges), f"counter:{n_target}")
    return CounterExample(g, g.points.copy(), np.array(radii), list(range(k)))


def gen_random_network(n: int, seed: int = 0, keep: float = 0.6, chords: float = 0.05) -> GeometricGraph:
    """Connected random geometric graph with dangling trees and a few crossings.

    Built from a Delaunay triangulation of uniform points: its minimum
    spanning tree is always kept, other Delaunay edges survive with
    probability ``keep``, and ``chords * n`` extra second-neighbour chords
    add crossings.
    """
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import minimum_spanning_tree
    from scipy.spatial import Delaunay

    if n < 4:
        raise ValueError("random network needs n >= 4")
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2))
    tri = Delaunay(pts)
    cand = set()
    for a, b, c in tri.simplices.tolist():
        for u, v in ((a, b), (b, c), (a, c)):
            cand.add((min(u, v), max(u, v)))
    cand = sorted(cand)
    arr = np.array(cand)
    w = np.hypot(*(pts[arr[:, 0]] - pts[arr[:, 1]]).T)
    mst = minimum_spanning_tree(coo_matrix((w, (arr[:, 0], arr[:, 1])), shape=(n, n))).tocoo()
    chosen = {(min(u, v), max(u, v)) for u, v in zip(mst.row.tolist(), mst.col.tolist())}
    for e in cand:
        if e not in chosen and rng.random() < keep:
            chosen.add(e)
    # chords between second neighbours in the triangulation
    nbr = [set() for _ in range(n)]
    for u, v in cand:
        nbr[u].add(v)
        nbr[v].add(u)
    for _ in range(int(chords * n)):
        u = int(rng.integers(n))
        two = sorted({w for v in nbr[u] for w in nbr[v]} - nbr[u] - {u})
        if two:
            v = two[int(rng.integers(len(two)))]
            chosen.add((min(u, v), max(u, v)))
    return GeometricGraph(pts, np.array(sorted(chosen)), f"random:{n}:{seed}")


def parse_generator(spec: str) -> GeometricGraph:
    """Resolve ``grid:k``, ``nested:s``, ``counter:n[:eps]`` or ``random:n[:seed]``."""
    parts = spec.split(":")
    kind = parts[0]
    try:
        args = [float(p) if "." in p else int(p) for p in parts[1:]]
    except ValueError:
        raise ValueError(f"bad generator arguments in {spec!r}") from None
    if kind == "grid" and len(args) == 1:
        return gen_grid(int(args[0]))
    if kind == "nested" and len(args) == 1:
        return gen_nested_squares(int(args[0]))
    if kind == "counter" and len(args) in (1, 2):
        return gen_counterexample(int(args[0]), *(float(a) for a in args[1:])).graph
    if kind == "random" and len(args) in (1, 2):
        return gen_random_network(int(args[0]), *(int(a) for a in args[1:]))
    raise ValueError(f"unknown generator spec {spec!r}")
