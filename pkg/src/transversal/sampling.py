"""Random lines and segments under the kinematic measure, and brute-force counters.

Lines are drawn with theta uniform on [0, 2pi) and offset r uniform on
[0, R], which is the rigid-motion invariant measure d(theta) dr restricted
to lines meeting the centred disk of radius R. Under it a line hits a
centred disk of radius rho*R with probability rho, and a curve of length L
inside the unit disk is crossed L/pi times on average.

Trials are split into fixed-size chunks, each with its own seed derived
from (seed, chunk index), so results do not depend on how many workers
process the chunks.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .disks import DiskSystem
from .geom import LineParam, Point, SegmentQ, line_side_many, segments_cross_many
from .graph import GeometricGraph

CHUNK = 256


class RandomStream:
    """Seeded sample source; identical seeds give identical sequences."""

    def __init__(self, seed: int = 42, *spawn_key: int):
        self.seed = int(seed)
        self.key = tuple(int(k) for k in spawn_key)
        self._gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence([self.seed & (2**64 - 1), *self.key])))

    def substream(self, index: int) -> "RandomStream":
        return RandomStream(self.seed, *self.key, index)

    def uniform(self, low=0.0, high=1.0, size=None):
        return self._gen.uniform(low, high, size)


@dataclass
class CrossingSample:
    query: Union[LineParam, SegmentQ]
    edge_crossings: int
    crossed_edge_ids: list[int] = field(default_factory=list)
    disk_stabs: Optional[int] = None


@dataclass(frozen=True)
class EstimateReport:
    kind: str
    trials: int
    mean: float
    std_error: float
    n: int
    seed: int

    @property
    def sqrt_n_ratio(self) -> float:
        return self.mean / math.sqrt(self.n) if self.n else float("nan")


# --------------------------------------------------------------------------
# sampling
# --------------------------------------------------------------------------


def sample_lines(rng: RandomStream, R: float, count: int) -> tuple[np.ndarray, np.ndarray]:
    if not R > 0:
        raise ValueError("enclosing radius must be positive")
    theta = rng.uniform(0.0, 2.0 * math.pi, count)
    r = rng.uniform(0.0, R, count)
    return theta, r


def sample_line(rng: RandomStream, R: float = 1.0) -> LineParam:
    theta, r = sample_lines(rng, R, 1)
    return LineParam(float(theta[0]), float(r[0]))


def _points_in_disk(rng: RandomStream, R: float, count: int) -> np.ndarray:
    out = np.empty((0, 2))
    while len(out) < count:
        need = count - len(out)
        cand = rng.uniform(-R, R, (2 * need + 8, 2))
        cand = cand[np.hypot(cand[:, 0], cand[:, 1]) <= R]
        out = np.vstack([out, cand[:need]])
    return out


def sample_segments(rng: RandomStream, R: float, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Endpoint arrays for ``count`` segments with both ends uniform in the disk."""
    if not R > 0:
        raise ValueError("enclosing radius must be positive")
    a = np.empty((0, 2))
    b = np.empty((0, 2))
    while len(a) < count:
        need = count - len(a)
        pa = _points_in_disk(rng, R, need)
        pb = _points_in_disk(rng, R, need)
        ok = np.any(pa != pb, axis=1)
        a = np.vstack([a, pa[ok]])
        b = np.vstack([b, pb[ok]])
    return a, b


def sample_segment(rng: RandomStream, R: float = 1.0) -> SegmentQ:
    a, b = sample_segments(rng, R, 1)
    return SegmentQ(Point(*a[0]), Point(*b[0]))


# --------------------------------------------------------------------------
# brute-force counters
# --------------------------------------------------------------------------


def _line_mask(g: GeometricGraph, theta: float, r: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    side = line_side_many(c, s, r, g.points)
    return (side[g.edges[:, 0]].astype(np.int16) * side[g.edges[:, 1]]) < 0


def count_line_crossings(g: GeometricGraph, line: LineParam) -> CrossingSample:
    mask = _line_mask(g, line.theta, line.r) if g.m else np.zeros(0, bool)
    ids = np.nonzero(mask)[0].tolist()
    return CrossingSample(line, len(ids), ids)


def count_segment_crossings(g: GeometricGraph, q: SegmentQ) -> CrossingSample:
    if g.m == 0:
        return CrossingSample(q, 0, [])
    starts = g.points[g.edges[:, 0]]
    ends = g.points[g.edges[:, 1]]
    # cheap bounding-box rejection before exact tests
    lo = np.minimum(q.a, q.b)
    hi = np.maximum(q.a, q.b)
    emin = np.minimum(starts, ends)
    emax = np.maximum(starts, ends)
    near = np.nonzero(np.all(emax >= lo, axis=1) & np.all(emin <= hi, axis=1))[0]
    mask = segments_cross_many(q.a, q.b, starts[near], ends[near])
    ids = near[mask].tolist()
    return CrossingSample(q, len(ids), ids)


def count_disk_stabs(ds: DiskSystem, line: LineParam) -> int:
    c, s = line.normal
    dist = np.abs(ds.centers[:, 0] * c + ds.centers[:, 1] * s - line.r)
    return int(np.count_nonzero(dist <= ds.radii))


def line_sample(g: GeometricGraph, line: LineParam, ds: Optional[DiskSystem] = None) -> CrossingSample:
    out = count_line_crossings(g, line)
    if ds is not None:
        out.disk_stabs = count_disk_stabs(ds, line)
    return out


# --------------------------------------------------------------------------
# Monte Carlo estimation
# --------------------------------------------------------------------------


def worker_count() -> int:
    env = os.environ.get("TRANSVERSAL_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return min(8, os.cpu_count() or 1)


def _chunk_counts(g, ds, kind, seed, chunk, count, R) -> np.ndarray:
    rng = RandomStream(seed, chunk)
    out = np.empty(count, dtype=np.int64)
    if kind == "segments":
        a, b = sample_segments(rng, R, count)
        for i in range(count):
            out[i] = count_segment_crossings(g, SegmentQ(Point(*a[i]), Point(*b[i]))).edge_crossings
        return out
    theta, r = sample_lines(rng, R, count)
    for i in range(count):
        if kind == "lines":
            out[i] = int(np.count_nonzero(_line_mask(g, theta[i], r[i]))) if g.m else 0
        elif kind == "disks":
            out[i] = count_disk_stabs(ds, LineParam(theta[i], r[i]))
        else:
            raise ValueError(f"unknown sample kind {kind!r}")
    return out


def sample_counts(g, kind: str, trials: int, seed: int = 42, ds=None, R: float = 1.0, workers: Optional[int] = None):
    """Per-trial crossing (or stab) counts, in trial order."""
    if kind == "disks" and ds is None:
        raise ValueError("disk stabbing needs a disk system")
    chunks = [(i, min(CHUNK, trials - i * CHUNK)) for i in range((trials + CHUNK - 1) // CHUNK)]
    workers = workers or worker_count()
    if workers == 1 or len(chunks) == 1:
        parts = [_chunk_counts(g, ds, kind, seed, i, c, R) for i, c in chunks]
    else:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda ic: _chunk_counts(g, ds, kind, seed, ic[0], ic[1], R), chunks))
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def summarize(values, kind: str, n: int, seed: int) -> EstimateReport:
    values = np.asarray(values, dtype=float)
    t = len(values)
    if t < 1:
        raise ValueError("need at least one trial")
    sd = float(values.std(ddof=1)) if t > 1 else 0.0
    return EstimateReport(kind, t, float(values.mean()), sd / math.sqrt(t), n, seed)


def estimate_mean_crossings(
    g: GeometricGraph,
    ds: Optional[DiskSystem] = None,
    kind: str = "lines",
    trials: int = 1000,
    seed: int = 42,
    R: float = 1.0,
    workers: Optional[int] = None,
) -> EstimateReport:
    if trials < 30:
        raise ValueError("estimate_mean_crossings needs at least 30 trials")
    counts = sample_counts(g, kind, trials, seed, ds=ds, R=R, workers=workers)
    return summarize(counts, kind, g.n, seed)


def loglog_slope(ns, means) -> tuple[float, float]:
    """Least-squares slope of log(mean) against log(n), with R^2."""
    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.asarray(means, dtype=float))
    slope, icept = np.polyfit(x, y, 1)
    resid = y - (slope * x + icept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), r2
