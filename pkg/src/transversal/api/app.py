"""HTTP service over the core package.

Graphs live in process memory under integer ids. Built query structures are
cached per graph and never mutated afterwards, so concurrent requests can
share them.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Optional

from fastapi import FastAPI, HTTPException

from .. import experiments
from ..disks import build_disk_system, ply_report
from ..geom import Point, SegmentQ
from ..graph import GeometricGraph, graph_stats, parse_generator, parse_gg
from ..sampling import estimate_mean_crossings
from ..subdivision import AtVertex, InsideFace, OnEdge, OutsideFrameError, locate_brute, traverse_segment
from . import schemas as S


@dataclass
class _Entry:
    graph: GeometricGraph
    build: Optional[experiments.Build] = None


class GraphStore:
    def __init__(self):
        self._lock = threading.Lock()
        self._items: dict[int, _Entry] = {}
        self._next = 1

    def add(self, g: GeometricGraph) -> int:
        with self._lock:
            gid = self._next
            self._next += 1
            self._items[gid] = _Entry(g)
            return gid

    def get(self, gid: int) -> _Entry:
        try:
            return self._items[gid]
        except KeyError:
            raise HTTPException(404, f"no graph with id {gid}") from None

    def build(self, gid: int) -> experiments.Build:
        entry = self.get(gid)
        with self._lock:
            if entry.build is None:
                entry.build = experiments.build_structure(entry.graph)
            return entry.build


app = FastAPI(title="transversal", version="0.1.0")
store = GraphStore()


def _bad_request(exc: Exception) -> HTTPException:
    return HTTPException(422, str(exc))


@app.post("/graphs", response_model=S.GraphInfo, status_code=201)
def create_graph(body: S.GraphCreate) -> S.GraphInfo:
    try:
        g = parse_generator(body.gen) if body.gen is not None else parse_gg(body.gg, body.name or "uploaded")
    except ValueError as exc:
        raise _bad_request(exc)
    gid = store.add(g)
    return S.GraphInfo(id=gid, name=g.name, n=g.n, m=g.m)


@app.get("/graphs/{gid}/stats", response_model=S.GraphStatsOut)
def get_stats(gid: int) -> S.GraphStatsOut:
    g = store.get(gid).graph
    s = graph_stats(g)
    return S.GraphStatsOut(
        name=g.name,
        n=s.n,
        m=s.m,
        max_degree=s.max_degree,
        total_edge_length=float(s.total_edge_length),
        component_count=s.component_count,
    )


@app.post("/graphs/{gid}/estimate", response_model=S.EstimateOut)
def estimate(gid: int, body: S.EstimateIn) -> S.EstimateOut:
    gn = experiments.normalized(store.get(gid).graph)
    try:
        ds = build_disk_system(gn) if body.kind == "disks" else None
        rep = estimate_mean_crossings(gn, ds=ds, kind=body.kind, trials=body.trials, seed=body.seed)
    except ValueError as exc:
        raise _bad_request(exc)
    return S.EstimateOut(
        kind=rep.kind,
        trials=rep.trials,
        mean=rep.mean,
        stderr=rep.std_error,
        mean_over_sqrt_n=rep.sqrt_n_ratio,
        seed=rep.seed,
    )


@app.post("/graphs/{gid}/ply", response_model=S.PlyOut)
def ply(gid: int, body: S.PlyIn) -> S.PlyOut:
    g = store.get(gid).graph
    try:
        rep = ply_report(build_disk_system(experiments.normalized(g)), body.target_ply)
    except ValueError as exc:
        raise _bad_request(exc)
    return S.PlyOut(
        n=g.n,
        ply=rep.ply,
        residual_ply=rep.residual_ply,
        exceptional=rep.exceptional_count,
        expected_stab=rep.expected_stab,
    )


@app.post("/graphs/{gid}/planarize", response_model=S.PlanarizeOut)
def planarize_graph(gid: int) -> S.PlanarizeOut:
    pg = _build(gid).planar
    return S.PlanarizeOut(crossings=len(pg.crossings), n_prime=pg.n, m_prime=pg.m)


@app.post("/graphs/{gid}/structure", response_model=S.StructureOut)
def structure(gid: int) -> S.StructureOut:
    return S.StructureOut(**_build(gid).structure.stats())


def _build(gid: int) -> experiments.Build:
    try:
        return store.build(gid)
    except (ValueError, RuntimeError) as exc:
        raise _bad_request(exc)


def _locus(b: experiments.Build, loc) -> S.LocusOut:
    d = b.structure.dcel
    if isinstance(loc, AtVertex):
        return S.LocusOut(kind="vertex", vertex=loc.vertex)
    if isinstance(loc, OnEdge):
        sub = d.sub_edge[loc.half_edge]
        edge = int(b.planar.source_edge[sub]) if sub >= 0 else None
        return S.LocusOut(kind="edge", edge=edge, face=d.face[loc.half_edge])
    assert isinstance(loc, InsideFace)
    return S.LocusOut(kind="face", face=loc.face, region=loc.deltoid)


@app.post("/graphs/{gid}/traverse", response_model=S.TraverseOut)
def traverse(gid: int, body: S.TraverseIn) -> S.TraverseOut:
    b = _build(gid)
    q = SegmentQ(Point(*body.a), Point(*body.b))
    try:
        res = traverse_segment(b.structure, locate_brute(b.structure, q.a), q, b.planar.source_edge)
    except OutsideFrameError as exc:
        raise _bad_request(exc)
    return S.TraverseOut(
        crossed_edges=res.crossed_edges,
        crossings=len(res.crossed_edges),
        triangle_steps=res.triangle_steps,
        end=_locus(b, res.end),
    )


@app.post("/graphs/{gid}/locate", response_model=S.LocusOut)
def locate(gid: int, body: S.LocateIn) -> S.LocusOut:
    b = _build(gid)
    try:
        return _locus(b, locate_brute(b.structure, body.point))
    except OutsideFrameError as exc:
        raise _bad_request(exc)
