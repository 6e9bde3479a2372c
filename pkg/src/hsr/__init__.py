"""Hidden-surface removal for triangle scenes with succinct partial unions."""

from .errors import DegeneracyDetected, HSRError, InvariantError, ValidationError
from .gen import gen_disjoint, gen_random, gen_worst_case, two_pairs_scene
from .geometry import Scene, load_scene, pad_to_power_of_two, save_scene
from .oracle import naive_union, trivial_viewshed
from .pipeline import SpaceStats, build_union_tree, compute_visibility, prepare_scene, viewshed
from .vismap import VisibilityMap

__all__ = [
    "DegeneracyDetected",
    "HSRError",
    "InvariantError",
    "Scene",
    "SpaceStats",
    "ValidationError",
    "VisibilityMap",
    "build_union_tree",
    "compute_visibility",
    "gen_disjoint",
    "gen_random",
    "gen_worst_case",
    "load_scene",
    "naive_union",
    "pad_to_power_of_two",
    "prepare_scene",
    "save_scene",
    "two_pairs_scene",
    "trivial_viewshed",
    "viewshed",
]
