"""Planar primitives with exactly decided signs.

Every predicate here is evaluated with a floating-point filter first and
falls back to rational arithmetic when the filter cannot certify the sign.
Intersection coordinates are plain floats.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

# Shewchuk's static bound for the 2x2 orientation determinant.
_EPS = 2.0 ** -53
_ORIENT_BOUND = (3.0 + 16.0 * _EPS) * _EPS
# x*c + y*s - r: three roundings plus the subtraction.
_LINE_BOUND = 8.0 * _EPS


class Point(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True, slots=True)
class SegmentQ:
    a: Point
    b: Point

    def __post_init__(self):
        if tuple(self.a) == tuple(self.b):
            raise ValueError(f"degenerate segment at {tuple(self.a)}")
        object.__setattr__(self, "a", Point(float(self.a[0]), float(self.a[1])))
        object.__setattr__(self, "b", Point(float(self.b[0]), float(self.b[1])))

    def length(self) -> float:
        return math.hypot(self.b.x - self.a.x, self.b.y - self.a.y)


@dataclass(frozen=True, slots=True)
class LineParam:
    """The line { P : <P, (cos theta, sin theta)> = r }."""

    theta: float
    r: float

    @property
    def normal(self) -> tuple[float, float]:
        return math.cos(self.theta), math.sin(self.theta)

    def side(self, p) -> int:
        return line_side(self, p)

    def chord(self, radius: float) -> Optional[SegmentQ]:
        """Intersection of the line with the centered disk of ``radius``."""
        if self.r >= radius:
            return None
        c, s = self.normal
        half = math.sqrt(radius * radius - self.r * self.r)
        mx, my = self.r * c, self.r * s
        return SegmentQ(Point(mx + half * s, my - half * c), Point(mx - half * s, my + half * c))


@dataclass(frozen=True, slots=True)
class RayQ:
    origin: Point
    direction: tuple[float, float]

    def __post_init__(self):
        norm = math.hypot(*self.direction)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"ray direction must be a unit vector, got norm {norm}")

    @classmethod
    def toward(cls, origin, target) -> "RayQ":
        dx, dy = target[0] - origin[0], target[1] - origin[1]
        norm = math.hypot(dx, dy)
        if norm == 0.0:
            raise ValueError("zero-length ray direction")
        return cls(Point(*origin), (dx / norm, dy / norm))


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def orient(p, q, s) -> int:
    """Sign of (q - p) x (s - p): +1 left turn, -1 right turn, 0 collinear."""
    acx = p[0] - s[0]
    bcx = q[0] - s[0]
    acy = p[1] - s[1]
    bcy = q[1] - s[1]
    detleft = acx * bcy
    detright = acy * bcx
    det = detleft - detright
    bound = _ORIENT_BOUND * (abs(detleft) + abs(detright))
    if det > bound or -det > bound:
        return 1 if det > 0 else -1
    return orient_exact(p, q, s)


def _as_ints(*vals: float) -> list[int]:
    """Exact integers proportional to ``vals`` by one common power of two."""
    ratios = [float(v).as_integer_ratio() for v in vals]
    shift = max(den.bit_length() for _, den in ratios) - 1
    return [num << (shift - den.bit_length() + 1) for num, den in ratios]


def orient_exact(p, q, s) -> int:
    px, py, qx, qy, sx, sy = _as_ints(p[0], p[1], q[0], q[1], s[0], s[1])
    return _sign((qx - px) * (sy - py) - (qy - py) * (sx - px))


def cross_sign(a, b, c, d) -> int:
    """Sign of (b - a) x (d - c), decided exactly."""
    ux, uy = b[0] - a[0], b[1] - a[1]
    vx, vy = d[0] - c[0], d[1] - c[1]
    left = ux * vy
    right = uy * vx
    det = left - right
    # each difference carries one rounding; be generous
    bound = 8.0 * _EPS * (abs(left) + abs(right))
    if det > bound or -det > bound:
        return 1 if det > 0 else -1
    ax, ay, bx, by, cx, cy, dx, dy = _as_ints(a[0], a[1], b[0], b[1], c[0], c[1], d[0], d[1])
    return _sign((bx - ax) * (dy - cy) - (by - ay) * (dx - cx))


def orient_many(p, q, pts: np.ndarray) -> np.ndarray:
    """Vectorised :func:`orient` of each row of ``pts`` against the directed line p->q."""
    pts = np.asarray(pts, dtype=float)
    acx = p[0] - pts[:, 0]
    bcx = q[0] - pts[:, 0]
    acy = p[1] - pts[:, 1]
    bcy = q[1] - pts[:, 1]
    detleft = acx * bcy
    detright = acy * bcx
    det = detleft - detright
    bound = _ORIENT_BOUND * (np.abs(detleft) + np.abs(detright))
    out = np.sign(det).astype(np.int8)
    unsure = np.nonzero(np.abs(det) <= bound)[0]
    for i in unsure:
        out[i] = orient_exact(p, q, pts[i])
    return out


def line_side(line: LineParam, p) -> int:
    """Sign of <p, n> - r for the line's float normal n = (cos theta, sin theta)."""
    c, s = line.normal
    a = p[0] * c
    b = p[1] * s
    v = a + b - line.r
    bound = _LINE_BOUND * (abs(a) + abs(b) + abs(line.r))
    if v > bound or -v > bound:
        return 1 if v > 0 else -1
    return _sign(Fraction(p[0]) * Fraction(c) + Fraction(p[1]) * Fraction(s) - Fraction(line.r))


def line_side_many(c: float, s: float, r: float, pts: np.ndarray) -> np.ndarray:
    pts = np.asarray(pts, dtype=float)
    a = pts[:, 0] * c
    b = pts[:, 1] * s
    v = a + b - r
    bound = _LINE_BOUND * (np.abs(a) + np.abs(b) + abs(r))
    out = np.sign(v).astype(np.int8)
    unsure = np.nonzero(np.abs(v) <= bound)[0]
    if len(unsure):
        fc, fs, fr = Fraction(c), Fraction(s), Fraction(r)
        for i in unsure:
            out[i] = _sign(Fraction(pts[i, 0]) * fc + Fraction(pts[i, 1]) * fs - fr)
    return out


class IntersectionKind(enum.Enum):
    DISJOINT = "disjoint"
    PROPER = "proper_crossing"
    TOUCHING = "touching"
    OVERLAPPING = "overlapping"


class Intersection(NamedTuple):
    kind: IntersectionKind
    point: Optional[Point] = None


def _canonical(s) -> tuple[tuple[float, float], tuple[float, float]]:
    a, b = (float(s.a[0]), float(s.a[1])), (float(s.b[0]), float(s.b[1]))
    return (a, b) if a <= b else (b, a)


def _on_closed_segment(a, b, p) -> bool:
    # assumes p collinear with a, b
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def crossing_point(a, b, c, d) -> Point:
    """Float intersection of the supporting lines of ab and cd (assumed to cross)."""
    ux, uy = b[0] - a[0], b[1] - a[1]
    d1 = ux * (c[1] - a[1]) - uy * (c[0] - a[0])
    d2 = ux * (d[1] - a[1]) - uy * (d[0] - a[0])
    t = d1 / (d1 - d2)
    return Point(c[0] + (d[0] - c[0]) * t, c[1] + (d[1] - c[1]) * t)


def segment_intersection(s1, s2) -> Intersection:
    """Classify how two closed segments meet.

    The result does not depend on argument order or on endpoint order.
    """
    p, q = sorted((_canonical(s1), _canonical(s2)))
    a, b = p
    c, d = q
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    if o1 == 0 and o2 == 0:
        # collinear: compare along the dominant axis
        axis = 0 if abs(b[0] - a[0]) >= abs(b[1] - a[1]) else 1
        lo = max(min(a[axis], b[axis]), min(c[axis], d[axis]))
        hi = min(max(a[axis], b[axis]), max(c[axis], d[axis]))
        if lo < hi:
            return Intersection(IntersectionKind.OVERLAPPING)
        if lo == hi:
            for cand in (a, b):
                if cand[axis] == lo and _on_closed_segment(c, d, cand):
                    return Intersection(IntersectionKind.TOUCHING, Point(*cand))
        return Intersection(IntersectionKind.DISJOINT)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return Intersection(IntersectionKind.PROPER, crossing_point(a, b, c, d))
    if o1 == 0 and _on_closed_segment(a, b, c):
        return Intersection(IntersectionKind.TOUCHING, Point(*c))
    if o2 == 0 and _on_closed_segment(a, b, d):
        return Intersection(IntersectionKind.TOUCHING, Point(*d))
    if o3 == 0 and _on_closed_segment(c, d, a):
        return Intersection(IntersectionKind.TOUCHING, Point(*a))
    if o4 == 0 and _on_closed_segment(c, d, b):
        return Intersection(IntersectionKind.TOUCHING, Point(*b))
    return Intersection(IntersectionKind.DISJOINT)


def segments_cross(a, b, c, d) -> bool:
    """Proper crossing of the open segments ab and cd, on raw coordinates."""
    return orient(a, b, c) * orient(a, b, d) < 0 and orient(c, d, a) * orient(c, d, b) < 0


def line_crosses_segment(line: LineParam, s) -> bool:
    """True iff the endpoints of ``s`` lie strictly on opposite sides of ``line``."""
    return line_side(line, s.a) * line_side(line, s.b) < 0


def segment_crosses_segment(q, e) -> bool:
    return segments_cross(q.a, q.b, e.a, e.b)


def segments_cross_many(a, b, starts: np.ndarray, ends: np.ndarray) -> np.ndarray:
    """Boolean mask: which segments starts[i]-ends[i] properly cross segment ab."""
    s1 = orient_many(a, b, starts)
    s2 = orient_many(a, b, ends)
    mask = (s1.astype(np.int16) * s2) < 0
    idx = np.nonzero(mask)[0]
    if len(idx) == 0:
        return mask
    st, en = starts[idx], ends[idx]
    # orient(c, d, a) for each candidate c=st, d=en
    t1 = orient_rows(st, en, a)
    t2 = orient_rows(st, en, b)
    mask[idx] = (t1.astype(np.int16) * t2) < 0
    return mask


def orient_rows(ps: np.ndarray, qs: np.ndarray, s) -> np.ndarray:
    """Row-wise orient(ps[i], qs[i], s)."""
    acx = ps[:, 0] - s[0]
    bcx = qs[:, 0] - s[0]
    acy = ps[:, 1] - s[1]
    bcy = qs[:, 1] - s[1]
    detleft = acx * bcy
    detright = acy * bcx
    det = detleft - detright
    bound = _ORIENT_BOUND * (np.abs(detleft) + np.abs(detright))
    out = np.sign(det).astype(np.int8)
    for i in np.nonzero(np.abs(det) <= bound)[0]:
        out[i] = orient_exact(ps[i], qs[i], s)
    return out


def polygon_area(pts) -> float:
    """Signed shoelace area (positive for counter-clockwise)."""
    pts = np.asarray(pts, dtype=float)
    if len(pts) < 3:
        return 0.0
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))
