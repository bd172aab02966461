"""
Outils de calcul: validité, chemins disjoints, corps finis, espaces de points.
"""

from src.tools.finite_field import Field, evaluate, make_field
from src.tools.path_systems import (
    PathSystem,
    all_systems,
    disjoint_systems,
    minor,
    side_product_check,
    symbolic_det,
    term_profile,
)
from src.tools.placement_validator import disjoint_paths_exist, is_distributed, is_valid
from src.tools.point_space import PointSpace, evaluate_batch, iterate_nonzero_points

__all__ = [
    "Field",
    "evaluate",
    "make_field",
    "PathSystem",
    "all_systems",
    "disjoint_systems",
    "minor",
    "side_product_check",
    "symbolic_det",
    "term_profile",
    "disjoint_paths_exist",
    "is_distributed",
    "is_valid",
    "PointSpace",
    "evaluate_batch",
    "iterate_nonzero_points",
]
