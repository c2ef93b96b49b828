"""Visibility queries on triangular meshes of polygonal maps, and meshes
optimized to make those queries cheap."""
from .bench import estimate_eta_T, estimate_eta_T_h, percentage_gap, run_benchmark, sample_uniform
from .mapio import PolygonMap, load_map, load_mesh, make_map, save_map, save_mesh
from .maps import floor_plan_map, office_map, terrain_map
from .meshopt import MwtConfig, WeightMatrix, compute_weights, mwt_holes, mwt_simple
from .trimesh import TriMesh, build_buckets, build_cdt, locate_triangle, validate_mesh
from .visibility import INF, Engine, VisibilityRegion, is_visible, query, \
    segment_visibility_region, visibility_region

__all__ = [
    "INF", "Engine", "MwtConfig", "PolygonMap", "TriMesh", "VisibilityRegion", "WeightMatrix",
    "build_buckets", "build_cdt", "compute_weights", "estimate_eta_T", "estimate_eta_T_h",
    "floor_plan_map", "office_map", "terrain_map",
    "is_visible", "load_map", "load_mesh", "locate_triangle", "make_map", "mwt_holes",
    "mwt_simple", "percentage_gap", "query", "run_benchmark", "sample_uniform", "save_map",
    "save_mesh", "segment_visibility_region", "validate_mesh", "visibility_region",
]
