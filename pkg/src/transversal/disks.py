"""Natural disk neighbourhood systems, ply and exceptional-disk selection."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .geom import Point
from .graph import GeometricGraph

# closed disks: a point within this relative slack of a boundary counts as inside
_CONTAIN_TOL = 1e-9


@dataclass(frozen=True)
class Disk:
    center: Point
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("disk radius must be positive")


@dataclass(frozen=True)
class DiskSystem:
    centers: np.ndarray  # (n, 2)
    radii: np.ndarray  # (n,)
    exceptional: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        c = np.asarray(self.centers, dtype=float).reshape(-1, 2)
        r = np.asarray(self.radii, dtype=float).reshape(-1)
        if len(c) != len(r):
            raise ValueError("centers and radii differ in length")
        if np.any(r <= 0):
            raise ValueError("disk radii must be positive")
        if any(not 0 <= i < len(r) for i in self.exceptional):
            raise ValueError("exceptional index out of range")
        object.__setattr__(self, "centers", c)
        object.__setattr__(self, "radii", r)
        object.__setattr__(self, "exceptional", frozenset(int(i) for i in self.exceptional))

    def __len__(self) -> int:
        return len(self.radii)

    @property
    def disks(self) -> list[Disk]:
        return [Disk(Point(x, y), r) for (x, y), r in zip(self.centers.tolist(), self.radii.tolist())]

    def with_exceptional(self, t) -> "DiskSystem":
        return DiskSystem(self.centers, self.radii, frozenset(t))

    def residual(self) -> "DiskSystem":
        keep = [i for i in range(len(self)) if i not in self.exceptional]
        return DiskSystem(self.centers[keep], self.radii[keep])

    def transformed(self, translation, scale: float) -> "DiskSystem":
        return DiskSystem((self.centers + np.asarray(translation)) * scale, self.radii * scale, self.exceptional)


@dataclass(frozen=True)
class PlyReport:
    ply: int
    witness: Point
    residual_ply: Optional[int] = None
    expected_stab: Optional[float] = None
    exceptional_count: int = 0
    approximate: bool = False


class IsolatedVertexError(ValueError):
    pass


def build_disk_system(g: GeometricGraph) -> DiskSystem:
    """Disk of radius r(v)/2 at each vertex, r(v) the longest incident edge."""
    longest = np.zeros(g.n)
    if g.m:
        lengths = g.edge_lengths()
        np.maximum.at(longest, g.edges[:, 0], lengths)
        np.maximum.at(longest, g.edges[:, 1], lengths)
    bad = np.nonzero(longest == 0)[0]
    if len(bad):
        raise IsolatedVertexError(f"vertex {int(bad[0])} is isolated; disk radius undefined")
    return DiskSystem(g.points.copy(), longest / 2.0)


def _as_arrays(disks) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(disks, DiskSystem):
        return disks.centers, disks.radii
    c = np.array([[d.center[0], d.center[1]] for d in disks], dtype=float).reshape(-1, 2)
    r = np.array([d.radius for d in disks], dtype=float)
    return c, r


def _circle_pair_points(c: np.ndarray, r: np.ndarray, pairs: np.ndarray) -> np.ndarray:
    if len(pairs) == 0:
        return np.empty((0, 2))
    i, j = pairs[:, 0], pairs[:, 1]
    d = c[j] - c[i]
    dist = np.hypot(d[:, 0], d[:, 1])
    ok = (dist > 0) & (dist <= r[i] + r[j]) & (dist >= np.abs(r[i] - r[j]))
    i, j, d, dist = i[ok], j[ok], d[ok], dist[ok]
    a = (r[i] ** 2 - r[j] ** 2 + dist**2) / (2 * dist)
    h = np.sqrt(np.maximum(r[i] ** 2 - a**2, 0.0))
    ux, uy = d[:, 0] / dist, d[:, 1] / dist
    mx, my = c[i, 0] + a * ux, c[i, 1] + a * uy
    p1 = np.column_stack([mx - h * uy, my + h * ux])
    p2 = np.column_stack([mx + h * uy, my - h * ux])
    return np.vstack([p1, p2])


def _depths(c: np.ndarray, r: np.ndarray, probes: np.ndarray, tree: cKDTree) -> np.ndarray:
    rmax = float(r.max())
    out = np.zeros(len(probes), dtype=np.int64)
    for k, near in enumerate(tree.query_ball_point(probes, rmax * (1 + _CONTAIN_TOL) + 1e-15)):
        if not near:
            continue
        near = np.asarray(near)
        dd = np.hypot(c[near, 0] - probes[k, 0], c[near, 1] - probes[k, 1])
        out[k] = int(np.count_nonzero(dd <= r[near] * (1 + _CONTAIN_TOL) + 1e-15))
    return out


def compute_ply(disks) -> PlyReport:
    """Exact maximum depth of a closed-disk arrangement.

    Candidates are all disk centres plus all pairwise circle intersection
    points; ties go to the earliest candidate.
    """
    c, r = _as_arrays(disks)
    if len(r) == 0:
        raise ValueError("compute_ply needs at least one disk")
    tree = cKDTree(c)
    pairs = tree.query_pairs(2.0 * float(r.max()), output_type="ndarray")
    probes = np.vstack([c, _circle_pair_points(c, r, pairs)])
    depth = _depths(c, r, probes, tree)
    best = int(np.argmax(depth))
    return PlyReport(int(depth[best]), Point(float(probes[best, 0]), float(probes[best, 1])))


def approximate_ply(disks, pitch: Optional[float] = None) -> PlyReport:
    """Lower bound on ply from a square probe grid; flagged approximate."""
    c, r = _as_arrays(disks)
    pitch = pitch or float(r.min()) / 8.0
    lo = (c - r[:, None]).min(axis=0)
    hi = (c + r[:, None]).max(axis=0)
    xs = np.arange(lo[0], hi[0] + pitch, pitch)
    ys = np.arange(lo[1], hi[1] + pitch, pitch)
    gx, gy = np.meshgrid(xs, ys)
    probes = np.column_stack([gx.ravel(), gy.ravel()])
    depth = _depths(c, r, probes, cKDTree(c))
    best = int(np.argmax(depth))
    return PlyReport(int(depth[best]), Point(float(probes[best, 0]), float(probes[best, 1])), approximate=True)


def expected_point_stab(disks, enclosing_radius: float) -> float:
    """Expected number of disks containing a uniform point of the centred disk."""
    c, r = _as_arrays(disks)
    R = float(enclosing_radius)
    reach = np.hypot(c[:, 0], c[:, 1]) + r
    if np.any(reach > R * (1 + 1e-12)):
        i = int(np.argmax(reach - R))
        raise ValueError(f"disk {i} extends beyond the enclosing disk of radius {R}")
    return float(np.sum((r / R) ** 2))


def select_exceptional(disks, target_ply: int = 4) -> list[int]:
    """Greedy exceptional set: drop the largest disk under the ply witness.

    Repeats until the remaining disks have ply at most ``target_ply``. Ties
    between equal radii go to the lowest index.
    """
    if target_ply < 1:
        raise ValueError("target_ply must be >= 1")
    c, r = _as_arrays(disks)
    alive = np.ones(len(r), dtype=bool)
    removed: list[int] = []
    while alive.any():
        idx = np.nonzero(alive)[0]
        rep = compute_ply(DiskSystem(c[idx], r[idx]))
        if rep.ply <= target_ply:
            break
        w = rep.witness
        dd = np.hypot(c[idx, 0] - w.x, c[idx, 1] - w.y)
        cover = idx[dd <= r[idx] * (1 + _CONTAIN_TOL) + 1e-15]
        # largest radius, then lowest index
        pick = int(min(cover.tolist(), key=lambda i: (-r[i], i)))
        alive[pick] = False
        removed.append(pick)
    return sorted(removed)


def ply_report(ds: DiskSystem, target_ply: int = 4, enclosing_radius: Optional[float] = None) -> PlyReport:
    """Ply, greedy residual ply and point-stab expectation for one system.

    Without ``enclosing_radius`` the smallest centred disk holding every
    disk (and at least the unit disk) is used.
    """
    if enclosing_radius is None:
        reach = np.hypot(ds.centers[:, 0], ds.centers[:, 1]) + ds.radii
        enclosing_radius = max(1.0, float(reach.max()))
    full = compute_ply(ds)
    t = select_exceptional(ds, target_ply)
    rest = ds.with_exceptional(t).residual()
    residual = compute_ply(rest).ply if len(rest) else 0
    return PlyReport(
        ply=full.ply,
        witness=full.witness,
        residual_ply=residual,
        expected_stab=expected_point_stab(ds, enclosing_radius),
        exceptional_count=len(t),
    )
