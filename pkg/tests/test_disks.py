import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transversal.disks import (
    Disk,
    DiskSystem,
    IsolatedVertexError,
    approximate_ply,
    build_disk_system,
    compute_ply,
    expected_point_stab,
    ply_report,
    select_exceptional,
)
from transversal.geom import Point
from transversal.graph import GeometricGraph, gen_counterexample, gen_grid, gen_random_network


def test_path_radii():
    g = GeometricGraph(np.array([[0.0, 0.0], [1.0, 0.0], [3.0, 0.0]]), np.array([[0, 1], [1, 2]]))
    assert build_disk_system(g).radii.tolist() == [0.5, 1.0, 1.0]
    assert build_disk_system(gen_grid(2)).radii.tolist() == [0.5] * 4


def test_isolated_vertex_rejected():
    g = GeometricGraph(np.array([[0.0, 0.0], [1.0, 0.0], [5.0, 5.0]]), np.array([[0, 1]]))
    with pytest.raises(IsolatedVertexError):
        build_disk_system(g)


@settings(max_examples=30, deadline=None)
@given(st.integers(4, 300), st.integers(0, 10_000))
def test_graph_inside_disk_intersection_graph(n, seed):
    g = gen_random_network(n, seed)
    ds = build_disk_system(g)
    u, v = g.edges[:, 0], g.edges[:, 1]
    d = np.hypot(*(ds.centers[u] - ds.centers[v]).T)
    assert np.all(d <= ds.radii[u] + ds.radii[v] + 1e-12)


def test_ply_trivial():
    one = compute_ply([Disk(Point(0.3, 0.2), 0.1)])
    assert one.ply == 1 and one.witness == Point(0.3, 0.2)
    assert compute_ply([Disk(Point(0, 0), 1.0), Disk(Point(0, 0), 1.0)]).ply == 2
    with pytest.raises(ValueError):
        compute_ply([])


def _grid_oracle(c, r, pitch):
    """Max depth over a square probe lattice; a lower bound on the true ply."""
    lo = (c - r[:, None]).min(axis=0)
    hi = (c + r[:, None]).max(axis=0)
    xs = np.arange(lo[0], hi[0] + pitch, pitch)
    ys = np.arange(lo[1], hi[1] + pitch, pitch)
    best = 0
    for y in ys:
        probes = np.column_stack([xs, np.full_like(xs, y)])
        d = np.hypot(probes[:, None, 0] - c[None, :, 0], probes[:, None, 1] - c[None, :, 1])
        best = max(best, int((d <= r[None, :]).sum(axis=1).max()))
    return best


@pytest.mark.parametrize("seed", range(6))
def test_ply_matches_grid_oracle(seed):
    rng = np.random.default_rng(seed)
    c = rng.uniform(0, 1, (50, 2))
    r = rng.uniform(0.05, 0.2, 50)
    exact = compute_ply(DiskSystem(c, r)).ply
    assert _grid_oracle(c, r, r.min() / 8) <= exact
    # the deepest cell can be a thin lens, so equality needs a finer lattice
    assert _grid_oracle(c, r, r.min() / 32) == exact


def test_approximate_ply_is_lower_bound_and_flagged():
    rng = np.random.default_rng(5)
    ds = DiskSystem(rng.uniform(0, 1, (40, 2)), rng.uniform(0.05, 0.2, 40))
    approx = approximate_ply(ds)
    assert approx.approximate and approx.ply <= compute_ply(ds).ply


def test_expected_stab_closed_forms():
    assert expected_point_stab([Disk(Point(0, 0), 1.0)], 1.0) == 1.0
    n, c = 64, 3.0
    rng = np.random.default_rng(0)
    r = math.sqrt(c / n)
    # centres kept far enough in that every disk stays inside the unit disk
    ang = rng.uniform(0, 2 * math.pi, n)
    rad = rng.uniform(0, 1 - r, n)
    ds = DiskSystem(np.column_stack([rad * np.cos(ang), rad * np.sin(ang)]), np.full(n, r))
    assert expected_point_stab(ds, 1.0) == pytest.approx(c, rel=1e-12)
    with pytest.raises(ValueError):
        expected_point_stab([Disk(Point(0.9, 0), 0.5)], 1.0)


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_expected_stab_monte_carlo(seed):
    rng = np.random.default_rng(seed)
    n = 30
    r = rng.uniform(0.02, 0.3, n)
    ang = rng.uniform(0, 2 * math.pi, n)
    rad = rng.uniform(0, 1, n) * (1 - r)
    c = np.column_stack([rad * np.cos(ang), rad * np.sin(ang)])
    trials = 40_000
    t = rng.uniform(0, 2 * math.pi, trials)
    s = np.sqrt(rng.uniform(0, 1, trials))
    p = np.column_stack([s * np.cos(t), s * np.sin(t)])
    counts = (np.hypot(p[:, None, 0] - c[None, :, 0], p[:, None, 1] - c[None, :, 1]) <= r).sum(axis=1)
    se = counts.std(ddof=1) / math.sqrt(trials)
    assert abs(counts.mean() - expected_point_stab(DiskSystem(c, r), 1.0)) <= 3 * se


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 20), st.floats(1e-3, 1e3), st.integers(0, 2**31))
def test_expected_stab_scale_invariant(n, scale, seed):
    rng = np.random.default_rng(seed)
    r = rng.uniform(0.01, 0.3, n)
    c = rng.uniform(-0.5, 0.5, (n, 2))
    base = expected_point_stab(DiskSystem(c, r), 1.0)
    assert expected_point_stab(DiskSystem(c * scale, r * scale), scale) == pytest.approx(base, rel=1e-12)


def test_exceptional_empty_when_ply_low():
    ds = DiskSystem(np.array([[0.0, 0.0], [3.0, 0.0]]), np.array([1.0, 1.0]))
    assert select_exceptional(ds, 1) == []


def test_exceptional_counterexample_hubs():
    ce = gen_counterexample(100, 0.1)
    assert select_exceptional(ce.disks, 1) == ce.hubs


@pytest.mark.parametrize("seed", range(4))
def test_exceptional_residual_and_monotone(seed):
    rng = np.random.default_rng(seed)
    ds = DiskSystem(rng.uniform(0, 1, (40, 2)), rng.uniform(0.05, 0.3, 40))
    prev = None
    for target in (1, 2, 3, 5, 8):
        t = select_exceptional(ds, target)
        rest = ds.with_exceptional(t).residual()
        assert len(rest) == 0 or compute_ply(rest).ply <= target
        if prev is not None:
            assert len(t) <= len(prev)
        prev = t
    with pytest.raises(ValueError):
        select_exceptional(ds, 0)


def test_ply_report_on_grid():
    g = gen_grid(8)
    rep = ply_report(build_disk_system(g.transformed((-3.5, -3.5), 1 / 8)), 4)
    assert rep.residual_ply <= 4
    assert rep.ply >= rep.residual_ply
    assert rep.expected_stab > 0
