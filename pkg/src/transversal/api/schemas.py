"""Request and response bodies for the HTTP service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

XY = tuple[float, float]


class GraphCreate(BaseModel):
    gen: Optional[str] = Field(None, description="generator spec such as grid:16")
    gg: Optional[str] = Field(None, description="graph in the .gg text format")
    name: Optional[str] = None

    @model_validator(mode="after")
    def one_source(self):
        if (self.gen is None) == (self.gg is None):
            raise ValueError("give exactly one of gen or gg")
        return self


class GraphInfo(BaseModel):
    id: int
    name: str
    n: int
    m: int


class GraphStatsOut(BaseModel):
    name: str
    n: int
    m: int
    max_degree: int
    total_edge_length: float
    component_count: int


class EstimateIn(BaseModel):
    kind: Literal["lines", "segments", "disks"] = "lines"
    trials: int = Field(1000, ge=30)
    seed: int = 42


class EstimateOut(BaseModel):
    kind: str
    trials: int
    mean: float
    stderr: float
    mean_over_sqrt_n: float
    seed: int


class PlyIn(BaseModel):
    target_ply: int = Field(4, ge=1)


class PlyOut(BaseModel):
    n: int
    ply: int
    residual_ply: int
    exceptional: int
    expected_stab: float


class PlanarizeOut(BaseModel):
    crossings: int
    n_prime: int
    m_prime: int


class StructureOut(BaseModel):
    faces: int
    max_face_size: int
    dummy_edges: int
    build_millis: float


class LocusOut(BaseModel):
    kind: Literal["face", "edge", "vertex"]
    face: Optional[int] = None
    region: Optional[int] = None
    edge: Optional[int] = Field(None, description="original edge id, for a point on an edge")
    vertex: Optional[int] = None


class TraverseIn(BaseModel):
    a: XY
    b: XY

    @model_validator(mode="after")
    def distinct(self):
        if tuple(self.a) == tuple(self.b):
            raise ValueError("segment endpoints coincide")
        return self


class TraverseOut(BaseModel):
    crossed_edges: list[int]
    crossings: int
    triangle_steps: int
    end: LocusOut


class LocateIn(BaseModel):
    point: XY
