import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transversal.graph import GeometricGraph, gen_counterexample, gen_grid, gen_random_network
from transversal.planarize import OverlappingEdgesError, find_crossings, planarize


def _orient(p, q, s):
    v = (Fraction(q[0]) - Fraction(p[0])) * (Fraction(s[1]) - Fraction(p[1])) - (
        Fraction(q[1]) - Fraction(p[1])
    ) * (Fraction(s[0]) - Fraction(p[0]))
    return (v > 0) - (v < 0)


def _brute_crossing_pairs(g):
    """All proper crossings by exact rational orientation over every edge pair."""
    P = g.points.tolist()
    out = set()
    for i, j in itertools.combinations(range(g.m), 2):
        a, b = g.edges[i].tolist()
        c, d = g.edges[j].tolist()
        if {a, b} & {c, d}:
            continue
        o1, o2 = _orient(P[a], P[b], P[c]), _orient(P[a], P[b], P[d])
        o3, o4 = _orient(P[c], P[d], P[a]), _orient(P[c], P[d], P[b])
        if o1 * o2 < 0 and o3 * o4 < 0:
            out.add((i, j))
    return out


X = GeometricGraph(np.array([[0.0, 0.0], [2.0, 2.0], [0.0, 2.0], [2.0, 0.0]]), np.array([[0, 1], [2, 3]]), "x")


def test_grid_has_no_crossings():
    assert find_crossings(gen_grid(6)) == []
    pg = planarize(gen_grid(4))
    assert (pg.n, pg.m) == (16, 24) and not pg.is_crossing.any()
    assert np.array_equal(pg.edges, gen_grid(4).edges)


def test_x_fixture():
    (c,) = find_crossings(X)
    assert (c.edge_a, c.edge_b) == (0, 1) and c.point == (1.0, 1.0)
    pg = planarize(X)
    assert (pg.n, pg.m) == (5, 4)
    assert pg.is_crossing.tolist() == [False] * 4 + [True]
    assert pg.chains == [[0, 1], [2, 3]]
    assert pg.source_edge.tolist() == [0, 0, 1, 1]


def test_shared_endpoint_not_a_crossing():
    g = GeometricGraph(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]), np.array([[0, 1], [0, 2], [1, 2]]))
    assert find_crossings(g) == []


def test_overlap_rejected_with_pair():
    g = GeometricGraph(np.array([[0.0, 0.0], [2.0, 0.0], [1.0, 0.0], [3.0, 0.0]]), np.array([[0, 1], [2, 3]]))
    with pytest.raises(OverlappingEdgesError) as info:
        find_crossings(g)
    assert info.value.pair == (0, 1)


def test_triple_point_merged():
    pts = np.array([[-1.0, 0.0], [1.0, 0.0], [0.0, -1.0], [0.0, 1.0], [-1.0, -1.0], [1.0, 1.0]])
    g = GeometricGraph(pts, np.array([[0, 1], [2, 3], [4, 5]]))
    assert len(find_crossings(g)) == 3
    pg = planarize(g)
    assert (pg.n, pg.m) == (7, 6)
    assert pg.points[6].tolist() == [0.0, 0.0]


def test_vertex_on_edge_splits_it():
    # T-junction: vertex 2 lies inside edge (0, 1)
    g = GeometricGraph(np.array([[0.0, 0.0], [2.0, 0.0], [1.0, 0.0], [1.0, 1.0]]), np.array([[0, 1], [2, 3]]))
    pg = planarize(g)
    assert pg.chains[0] == [0, 1] and pg.m == 3 and not pg.is_crossing.any()


@settings(max_examples=25, deadline=None)
@given(st.integers(4, 120), st.integers(0, 10_000), st.floats(0.0, 0.3))
def test_finder_matches_all_pairs_oracle(n, seed, chords):
    g = gen_random_network(n, seed, chords=chords)
    want = _brute_crossing_pairs(g)
    fast = find_crossings(g, brute_force=False)
    assert {(c.edge_a, c.edge_b) for c in fast} == want
    assert [(c.edge_a, c.edge_b) for c in fast] == sorted(want)
    assert find_crossings(g, brute_force=True) == fast


def _dense_random(seed, n=40, m=60):
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2))
    pairs = sorted({tuple(sorted(rng.choice(n, 2, replace=False).tolist())) for _ in range(m)})
    return GeometricGraph(pts, np.array(pairs))


@pytest.mark.parametrize("seed", range(5))
def test_planarize_counting_identity(seed):
    g = _dense_random(seed)
    x = len(find_crossings(g))
    assert x > 0
    pg = planarize(g)
    assert (pg.n, pg.m) == (g.n + x, g.m + 2 * x)
    assert pg.n - pg.m == g.n - g.m - x
    assert find_crossings(pg.as_graph()) == []


@pytest.mark.parametrize("g", [_dense_random(9), gen_counterexample(144).graph, gen_random_network(300, 4, chords=0.2)])
def test_chains_reassemble_source_edges(g):
    pg = planarize(g)
    sub = np.hypot(*(pg.points[pg.edges[:, 1]] - pg.points[pg.edges[:, 0]]).T)
    for e, (u, v) in enumerate(g.edges.tolist()):
        chain = pg.chains[e]
        assert all(pg.source_edge[s] == e for s in chain)
        walk = [pg.edges[chain[0]][0]] + [pg.edges[s][1] for s in chain]
        assert walk[0] == u and walk[-1] == v
        assert all(pg.edges[a][1] == pg.edges[b][0] for a, b in zip(chain, chain[1:]))
        assert math.fsum(sub[chain]) == pytest.approx(math.dist(g.points[u], g.points[v]), rel=1e-9)
    assert find_crossings(pg.as_graph(), brute_force=False) == []
