"""Ear-clipping triangulation of a weakly simple polygon.

The polygon is a closed walk whose positions (occurrences) may repeat a
point, as face boundaries of a plane graph do at cut vertices and along
dangling edges. Triangles are reported as CCW triples of occurrence indices.
"""

from __future__ import annotations

import numpy as np

from ..geom import orient


class TriangulationError(RuntimeError):
    pass


def _strictly_inside_angle(c, c_next, c_prev, x) -> bool:
    # interior of the CCW triangle angle at c, spanned from c->c_next to c->c_prev
    return orient(c, c_next, x) > 0 and orient(c, c_prev, x) < 0


def _strictly_between(a, b, x) -> bool:
    # x assumed collinear with a, b
    return min(a[0], b[0]) <= x[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= x[1] <= max(a[1], b[1]) and x != a and x != b


def triangulate_walk(points) -> list[tuple[int, int, int]]:
    """Triangulate the CCW closed walk ``points`` into ``len(points) - 2`` triangles."""
    P = [tuple(map(float, p)) for p in points]
    f = len(P)
    if f < 3:
        raise TriangulationError(f"walk of length {f} has no interior")
    X = np.array(P, dtype=float)
    nxt = [(i + 1) % f for i in range(f)]
    prv = [(i - 1) % f for i in range(f)]
    alive = np.ones(f, dtype=bool)

    def is_ear(i: int) -> bool:
        p, n = prv[i], nxt[i]
        a, b, c = P[p], P[i], P[n]
        if orient(a, b, c) <= 0:
            return False
        lo = np.minimum(np.minimum(a, b), c)
        hi = np.maximum(np.maximum(a, b), c)
        box = alive & np.all(X >= lo, axis=1) & np.all(X <= hi, axis=1)
        box[[p, i, n]] = False
        corners = ((a, b, c), (b, c, a), (c, a, b))
        for j in np.nonzero(box)[0].tolist():
            x = P[j]
            hit = next((cn for cn in corners if cn[0] == x), None)
            if hit is not None:
                # another pass through a corner: its edges must stay outside the ear
                for nb in (prv[j], nxt[j]):
                    if _strictly_inside_angle(hit[0], hit[1], hit[2], P[nb]):
                        return False
                continue
            oa, ob, oc = orient(a, b, x), orient(b, c, x), orient(c, a, x)
            if oa > 0 and ob > 0 and oc > 0:
                return False
            if (oc == 0 and _strictly_between(c, a, x)) or (oa == 0 and _strictly_between(a, b, x)) or (
                ob == 0 and _strictly_between(b, c, x)
            ):
                return False
        return True

    out: list[tuple[int, int, int]] = []
    remaining = f
    i = 0
    stop = i
    while remaining > 3:
        if is_ear(i):
            p, n = prv[i], nxt[i]
            out.append((p, i, n))
            nxt[p], prv[n] = n, p
            alive[i] = False
            remaining -= 1
            i = n
            stop = n
            continue
        i = nxt[i]
        if i == stop:
            raise TriangulationError(f"no ear found with {remaining} of {f} positions left")
    p, n = prv[i], nxt[i]
    if orient(P[p], P[i], P[n]) <= 0:
        raise TriangulationError("final triangle is degenerate")
    out.append((p, i, n))
    return out
