"""Experiment runners shared by the command line and the HTTP service.

Every runner returns a :class:`Table`; nothing here touches the terminal.
Tables render to CSV deterministically, so repeated runs with the same
configuration produce identical bytes.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .disks import build_disk_system, ply_report
from .geom import Point, SegmentQ
from .graph import GeometricGraph, graph_stats, load_graph, normalize_to_unit_disk, parse_generator
from .planarize import PlanarGraph, planarize
from .sampling import RandomStream, count_segment_crossings, estimate_mean_crossings, sample_segments
from .subdivision import GeodesicStructure, build_dcel, geodesic_triangulate, locate_brute, traverse_segment

KINDS = ("lines", "segments", "disks", "ply", "planarize", "query-bench", "stats")

TRANSVERSAL_HEADER = ("name", "n", "m", "kind", "trials", "mean", "stderr", "mean_over_sqrt_n", "seed")
PLY_HEADER = ("n", "ply", "residual_ply", "|T|", "sqrt_n", "expected_stab")
PLANARIZE_HEADER = ("name", "n", "m", "crossings", "n_prime", "m_prime", "crossings_over_sqrt_n")
TRACE_HEADER = ("query_id", "crossings", "triangle_steps", "build_name", "oracle")
STRUCTURE_HEADER = ("build_name", "faces", "max_face_size", "dummy_edges", "build_millis")
STATS_HEADER = ("name", "n", "m", "max_degree", "total_edge_length", "component_count")


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    inputs: tuple = ()
    arcs: Optional[str] = None
    gens: tuple = ()
    trials: int = 1000
    seed: int = 42
    target_ply: int = 4

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.inputs and not self.gens:
            raise ValueError("give at least one --input or --gen")


@dataclass
class Table:
    header: tuple
    rows: list = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header)
        for row in self.rows:
            w.writerow([_fmt(v) for v in row])
        return buf.getvalue()

    def records(self) -> list[dict]:
        return [dict(zip(self.header, r)) for r in self.rows]


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return format(v, ".10g")
    return str(v)


def load_inputs(inputs: Sequence[str] = (), arcs: Optional[str] = None, gens: Sequence[str] = ()) -> list[GeometricGraph]:
    graphs = [load_graph(Path(p), arcs) for p in inputs]
    for spec in gens:
        for part in spec.split(","):
            if part.strip():
                graphs.append(parse_generator(part.strip()))
    return graphs


def normalized(g: GeometricGraph) -> GeometricGraph:
    gn, _ = normalize_to_unit_disk(g)
    return gn


def stats_table(graphs: Sequence[GeometricGraph]) -> Table:
    t = Table(STATS_HEADER)
    for g in graphs:
        s = graph_stats(g)
        t.rows.append((g.name, s.n, s.m, s.max_degree, float(s.total_edge_length), s.component_count))
    return t


def transversal_table(graphs, kind: str, trials: int, seed: int = 42) -> Table:
    """Mean crossings (or disk stabs) of random lines or segments, graphs in the unit disk."""
    t = Table(TRANSVERSAL_HEADER)
    for g in graphs:
        gn = normalized(g)
        ds = build_disk_system(gn) if kind == "disks" else None
        rep = estimate_mean_crossings(gn, ds=ds, kind=kind, trials=trials, seed=seed)
        t.rows.append((g.name, g.n, g.m, kind, rep.trials, rep.mean, rep.std_error, rep.sqrt_n_ratio, seed))
    return t


def ply_table(graphs, target_ply: int = 4) -> Table:
    t = Table(PLY_HEADER)
    for g in graphs:
        rep = ply_report(build_disk_system(normalized(g)), target_ply)
        t.rows.append((g.n, rep.ply, rep.residual_ply, rep.exceptional_count, math.sqrt(g.n), rep.expected_stab))
    return t


def planarize_table(graphs) -> Table:
    t = Table(PLANARIZE_HEADER)
    for g in graphs:
        pg = planarize(g)
        t.rows.append((g.name, g.n, g.m, len(pg.crossings), pg.n, pg.m, len(pg.crossings) / math.sqrt(g.n)))
    return t


@dataclass
class Build:
    graph: GeometricGraph
    planar: PlanarGraph
    structure: GeodesicStructure


def build_structure(g: GeometricGraph) -> Build:
    pg = planarize(g)
    gs = geodesic_triangulate(build_dcel(pg, join_components=True))
    return Build(g, pg, gs)


def query_bench(graphs, trials: int, seed: int = 42) -> tuple[Table, Table]:
    """Random segment queries through the structure, each checked against brute force."""
    trace = Table(TRACE_HEADER)
    structure = Table(STRUCTURE_HEADER)
    qid = 0
    for gi, g in enumerate(graphs):
        b = build_structure(normalized(g))
        st = b.structure.stats()
        structure.rows.append((g.name, st["faces"], st["max_face_size"], st["dummy_edges"], st["build_millis"]))
        A, B = sample_segments(RandomStream(seed, gi), 1.0, trials)
        for a, e in zip(A.tolist(), B.tolist()):
            q = SegmentQ(Point(*a), Point(*e))
            res = traverse_segment(b.structure, locate_brute(b.structure, q.a), q, b.planar.source_edge)
            want = sorted(count_segment_crossings(b.graph, q).crossed_edge_ids)
            trace.rows.append((qid, len(res.crossed_edges), res.triangle_steps, g.name, "ok" if res.crossed_edges == want else "mismatch"))
            qid += 1
    return trace, structure


def run(cfg: ExperimentConfig) -> tuple[Table, Optional[Table]]:
    """Main table for ``cfg.kind`` plus the structure table for query benches."""
    graphs = load_inputs(cfg.inputs, cfg.arcs, cfg.gens)
    if cfg.kind == "stats":
        return stats_table(graphs), None
    if cfg.kind in ("lines", "segments", "disks"):
        return transversal_table(graphs, cfg.kind, cfg.trials, cfg.seed), None
    if cfg.kind == "ply":
        return ply_table(graphs, cfg.target_ply), None
    if cfg.kind == "planarize":
        return planarize_table(graphs), None
    return query_bench(graphs, cfg.trials, cfg.seed)
