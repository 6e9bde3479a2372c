from fractions import Fraction

import numpy as np
import pytest

from hsr.errors import UnsupportedSize
from hsr.gen import gen_disjoint, gen_random, gen_worst_case, scene_from_2d, two_pairs_scene
from hsr.geometry import check_general_position, validate_depth_order
from hsr.oracle import Arrangement, naive_union, trivial_viewshed
from hsr.overlay import boundary_crossings, region_area, same_region, triangle_region
from hsr.pipeline import build_union_tree, prepare_scene

from conftest import tri2d


def oracle(scene):
    return trivial_viewshed(prepare_scene(scene, validate=False))[0]


def test_oracle_single_triangle():
    vm = oracle(scene_from_2d([tri2d((0, 0), (1, 0), (0, 1))]))
    (poly,) = vm.entries[0]
    assert len(poly.outer) == 3 and vm.area(0) == Fraction(1, 2)


def test_oracle_near_triangle_cuts_far(two_overlapping):
    vm = oracle(two_overlapping)
    near = triangle_region(two_overlapping, 1)
    assert vm.area(1) == region_area(near, two_overlapping)
    assert 0 < vm.area(0) < 2


def test_oracle_area_equals_union_area():
    s = prepare_scene(gen_random(12, 4))
    vm, crossings = trivial_viewshed(s)
    assert crossings > 0
    assert vm.total_area() == region_area(naive_union(s), s)


def test_arrangement_faces_close():
    arr = Arrangement(prepare_scene(two_pairs_scene()))
    for h in range(len(arr.tail)):
        assert arr.tail[arr.next(h)] == arr.head[h]
        assert arr.face[arr.next(h)] == arr.face[h]


@pytest.mark.parametrize("seed", range(5))
def test_oracle_permutation_invariant_up_to_ids(seed):
    """Shuffling the same 3D triangles only relabels the output."""
    base = gen_random(8, 60)
    ref = oracle(base).to_json(exact=True)["triangles"]
    perm = np.random.default_rng(seed).permutation(base.n).tolist()
    shuffled = base.with_triangles([base.triangles[p] for p in perm])
    got = oracle(shuffled).to_json(exact=True)["triangles"]
    for new_id, old_id in enumerate(perm):
        assert got[new_id]["visible"] == ref[old_id]["visible"]


@pytest.mark.parametrize("seed", range(3))
def test_naive_union_order_invariant(seed):
    s = prepare_scene(gen_random(10, 70 + seed))
    order = np.random.default_rng(seed).permutation(s.n).tolist()
    assert same_region(naive_union(s), naive_union(s, order), s)


def test_naive_union_disjoint_keeps_all_triangles():
    s = prepare_scene(gen_disjoint(6, 2))
    u = naive_union(s, range(s.n_padding, s.n))
    assert len(u.cycles) == 6 and len(u) == 18


@pytest.mark.parametrize("make", [gen_random, gen_disjoint])
def test_generators_are_deterministic(make):
    assert make(9, 3).triangles == make(9, 3).triangles
    assert make(9, 3).triangles != make(9, 4).triangles


@pytest.mark.parametrize(
    "scene", [gen_random(16, 2), gen_disjoint(16, 2), gen_worst_case(16, 2), two_pairs_scene()]
)
def test_generated_scenes_validate(scene):
    check_general_position(scene)
    validate_depth_order(scene)


@pytest.mark.parametrize("n", [0, 4, 12])
def test_worst_case_rejects_sizes(n):
    with pytest.raises(UnsupportedSize):
        gen_worst_case(n)


def test_disjoint_projections_never_meet():
    s = prepare_scene(gen_disjoint(16, 5))
    assert Arrangement(s).crossings == 0
    tree = build_union_tree(s)
    assert tree.stats.K_without_leaves == 3 * 16 * 4


def test_worst_case_clusters_cross_pairwise():
    s = prepare_scene(gen_worst_case(8))
    regions = [triangle_region(s, t) for t in range(s.n)]
    for a in range(8):
        for b in range(a + 1, 8):
            assert boundary_crossings(regions[a], regions[b], s)


def test_worst_case_outgrows_disjoint():
    worst = build_union_tree(prepare_scene(gen_worst_case(8))).stats
    plain = build_union_tree(prepare_scene(gen_disjoint(8, 0))).stats
    assert worst.K_with_leaves > 2 * plain.K_without_leaves
