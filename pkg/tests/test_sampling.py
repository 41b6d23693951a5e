import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transversal.disks import DiskSystem, build_disk_system
from transversal.geom import LineParam, Point, SegmentQ
from transversal.graph import GeometricGraph, gen_grid, gen_nested_squares, gen_random_network, normalize_to_unit_disk
from transversal.sampling import (
    RandomStream,
    count_disk_stabs,
    count_line_crossings,
    count_segment_crossings,
    estimate_mean_crossings,
    line_sample,
    loglog_slope,
    sample_counts,
    sample_line,
    sample_lines,
    sample_segment,
    sample_segments,
)


def _unit(g):
    return normalize_to_unit_disk(g)[0]


def test_line_sequence_deterministic():
    s1, s2 = RandomStream(9), RandomStream(9)
    first = [sample_line(s1) for _ in range(20)]
    assert first == [sample_line(s2) for _ in range(20)]
    t1, r1 = sample_lines(RandomStream(9, 3), 2.0, 100)
    assert np.all((0 <= t1) & (t1 < 2 * math.pi)) and np.all((0 <= r1) & (r1 <= 2.0))
    with pytest.raises(ValueError):
        sample_lines(RandomStream(1), 0.0, 5)


def test_hit_probability_equals_radius_ratio():
    rho, trials = 0.3, 100_000
    _, r = sample_lines(RandomStream(5), 1.0, trials)
    hits = (r <= rho).astype(float)
    se = hits.std(ddof=1) / math.sqrt(trials)
    assert abs(hits.mean() - rho) <= 3 * se


def test_polyline_length_over_pi():
    pts = np.array([[-0.6, -0.2], [0.1, 0.4], [0.5, -0.3], [0.2, -0.7]])
    g = GeometricGraph(pts, np.array([[0, 1], [1, 2], [2, 3]]))
    L = float(g.edge_lengths().sum())
    counts = sample_counts(g, "lines", 20_000, seed=3)
    se = counts.std(ddof=1) / math.sqrt(len(counts))
    assert abs(counts.mean() - L / math.pi) <= 3 * se


def test_segments_inside_disk_and_radial_mean():
    a, b = sample_segments(RandomStream(4), 2.5, 30_000)
    norms = np.hypot(*np.vstack([a, b]).T) / 2.5
    assert norms.max() <= 1.0
    assert np.all(np.any(a != b, axis=1))
    se = norms.std(ddof=1) / math.sqrt(len(norms))
    assert abs(norms.mean() - 2 / 3) <= 3 * se
    assert sample_segment(RandomStream(8)) == sample_segment(RandomStream(8))


def test_line_counts_on_constructions():
    g = gen_grid(5)
    assert count_line_crossings(g, LineParam(0.0, 50.0)).edge_crossings == 0
    mid = count_line_crossings(g, LineParam(math.pi / 2, 0.5))
    assert mid.edge_crossings == 5 and mid.crossed_edge_ids == sorted(mid.crossed_edge_ids)
    for s in (1, 3, 8):
        nested = gen_nested_squares(s)
        for theta in (0.3, 1.1, 2.0):
            assert count_line_crossings(nested, LineParam(theta, 0.0)).edge_crossings == 2 * s


def test_segment_counts():
    g = gen_grid(3)
    assert count_segment_crossings(g, SegmentQ(Point(0.2, 0.2), Point(0.8, 0.7))).edge_crossings == 0
    gn = _unit(gen_random_network(120, 2))
    rng = RandomStream(6)
    for _ in range(50):
        line = sample_line(rng)
        chord = line.chord(1.0 + 1e-9)
        if chord is None:
            continue
        assert count_segment_crossings(gn, chord).crossed_edge_ids == count_line_crossings(gn, line).crossed_edge_ids


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**31))
def test_segment_count_at_most_supporting_line(seed):
    gn = _unit(gen_random_network(80, seed % 97))
    q = sample_segment(RandomStream(seed))
    d = np.subtract(q.b, q.a)
    theta = math.atan2(d[0], -d[1])  # normal perpendicular to the segment
    line = LineParam(theta % (2 * math.pi), q.a.x * math.cos(theta) + q.a.y * math.sin(theta))
    seg = set(count_segment_crossings(gn, q).crossed_edge_ids)
    assert len(seg) <= count_line_crossings(gn, line).edge_crossings


def test_disk_stabs():
    ds = DiskSystem(np.array([[0.0, 0.0]]), np.array([1.0]))
    rng = RandomStream(1)
    assert all(count_disk_stabs(ds, sample_line(rng)) == 1 for _ in range(100))
    rs = np.array([0.05, 0.1, 0.2, 0.15])
    cs = np.array([[0.3, 0.1], [-0.5, 0.2], [0.0, -0.6], [0.6, 0.6]])
    counts = sample_counts(None, "disks", 50_000, seed=2, ds=DiskSystem(cs, rs))
    se = counts.std(ddof=1) / math.sqrt(len(counts))
    assert abs(counts.mean() - rs.sum()) <= 3 * se


def test_estimate_replay_and_workers():
    gn = _unit(gen_grid(8))
    a = estimate_mean_crossings(gn, trials=30, seed=11)
    assert a == estimate_mean_crossings(gn, trials=30, seed=11)
    one = sample_counts(gn, "segments", 700, seed=4, workers=1)
    many = sample_counts(gn, "segments", 700, seed=4, workers=5)
    assert np.array_equal(one, many)
    with pytest.raises(ValueError):
        estimate_mean_crossings(gn, trials=29)
    assert a.sqrt_n_ratio == pytest.approx(a.mean / 8)


def test_rotation_invariance():
    g = _unit(gen_random_network(200, 7))
    phi = float(np.random.default_rng(0).uniform(0, 2 * math.pi))
    rot = np.array([[math.cos(phi), -math.sin(phi)], [math.sin(phi), math.cos(phi)]])
    gr = GeometricGraph(g.points @ rot.T, g.edges)
    a = estimate_mean_crossings(g, trials=4000, seed=1)
    b = estimate_mean_crossings(gr, trials=4000, seed=2)
    assert abs(a.mean - b.mean) <= 3 * math.hypot(a.std_error, b.std_error)


def test_charging_bound_per_line():
    g = _unit(gen_random_network(150, 9))
    ds = build_disk_system(g)
    delta = int(g.degrees().max())
    rng = RandomStream(12)
    for _ in range(500):
        s = line_sample(g, sample_line(rng), ds)
        assert s.edge_crossings == len(s.crossed_edge_ids)
        assert s.edge_crossings <= delta * s.disk_stabs


def test_loglog_slope_exact_power():
    ns = [10, 100, 1000]
    slope, r2 = loglog_slope(ns, [3 * n**0.5 for n in ns])
    assert slope == pytest.approx(0.5) and r2 == pytest.approx(1.0)
