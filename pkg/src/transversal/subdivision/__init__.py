"""Planar subdivision with geodesic-triangle regions for segment queries."""

from .dcel import Dcel, DisconnectedGraphError, InvariantError, build_dcel, wedge_half_edge
from .geodesic import Deltoid, GeodesicFace, GeodesicStructure, geodesic_triangulate, triangle_corners
from .query import (
    AtVertex,
    InsideFace,
    Locus,
    OnEdge,
    OutsideFrameError,
    RayHit,
    TraversalResult,
    locate_brute,
    ray_shoot_in_face,
    traverse_segment,
    walk_locate,
)
from .triangulate import TriangulationError, triangulate_walk

__all__ = [
    "AtVertex",
    "Dcel",
    "Deltoid",
    "DisconnectedGraphError",
    "GeodesicFace",
    "GeodesicStructure",
    "InsideFace",
    "InvariantError",
    "Locus",
    "OnEdge",
    "OutsideFrameError",
    "RayHit",
    "TraversalResult",
    "TriangulationError",
    "build_dcel",
    "geodesic_triangulate",
    "locate_brute",
    "ray_shoot_in_face",
    "traverse_segment",
    "triangle_corners",
    "triangulate_walk",
    "walk_locate",
    "wedge_half_edge",
]
