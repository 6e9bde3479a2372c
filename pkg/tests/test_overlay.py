from fractions import Fraction

import numpy as np
import pytest

from hsr.gen import gen_random, scene_from_2d
from hsr.geometry import _area2, triangle_overlap
from hsr.oracle import naive_union
from hsr.overlay import (
    Location,
    Region,
    all_pairs_crossings,
    boundary_crossings,
    cycle_area2,
    is_outer,
    overlay,
    point_in_region,
    region_area,
    region_difference,
    region_intersection,
    region_union,
    same_region,
    triangle_region,
)

from conftest import tri2d


def ops(scene, a, b):
    x = boundary_crossings(a, b, scene)
    return region_union(a, b, x, scene), region_intersection(a, b, x, scene), region_difference(a, b, x, scene)


def clip_area(scene, i, j):
    poly = triangle_overlap(scene, i, j)
    return abs(_area2(poly)) / 2 if len(poly) >= 3 else Fraction(0)


@pytest.fixture
def disjoint():
    return scene_from_2d([tri2d((0, 0), (1, 0), (0, 1)), tri2d((3, 3), (4, 3), (3, 4))])


@pytest.fixture
def nested():
    return scene_from_2d([tri2d((0, 0), (6, 0), (0, 6)), tri2d((1, 1), (3, 1), (1, 3))])


def test_disjoint(disjoint):
    a, b = triangle_region(disjoint, 0), triangle_region(disjoint, 1)
    assert boundary_crossings(a, b, disjoint) == []
    u, i, d = ops(disjoint, a, b)
    assert same_region(u, Region(a.cycles + b.cycles), disjoint)
    assert not i
    assert same_region(d, a, disjoint)


def test_nested(nested):
    a, b = triangle_region(nested, 0), triangle_region(nested, 1)
    u, i, d = ops(nested, a, b)
    assert same_region(u, a, nested)
    assert same_region(i, b, nested)
    assert len(d.cycles) == 2
    outer = [c for c in d.cycles if is_outer(nested, c)]
    holes = [c for c in d.cycles if not is_outer(nested, c)]
    assert len(outer) == len(holes) == 1
    assert region_area(d, nested) == 18 - 2


def test_overlapping_pair(two_overlapping):
    s = two_overlapping
    a, b = triangle_region(s, 0), triangle_region(s, 1)
    x = boundary_crossings(a, b, s)
    assert len(x) == 2
    assert x == all_pairs_crossings(a, b, s)
    u, i, d = ops(s, a, b)
    common = clip_area(s, 0, 1)
    area_a, area_b = region_area(a, s), region_area(b, s)
    assert 0 < common < min(area_a, area_b)
    assert len(u.cycles) == 1 and set(x) <= u.vertices()
    assert region_area(u, s) == area_a + area_b - common
    assert region_area(i, s) == common
    assert region_area(d, s) == area_a - common


def test_overlay_multi_op_matches_single_ops(two_overlapping):
    s = two_overlapping
    a, b = triangle_region(s, 0), triangle_region(s, 1)
    res = overlay(a, b, s, ("union", "intersection", "difference"))
    for got, want in zip((res["union"], res["intersection"], res["difference"]), ops(s, a, b)):
        assert same_region(got, want, s)


@pytest.mark.parametrize(
    "point,expect",
    [((Fraction(1, 2), Fraction(1, 2)), Location.INSIDE), ((2, 2), Location.OUTSIDE), ((1, 1), Location.BOUNDARY)],
)
def test_point_in_region(two_overlapping, point, expect):
    assert point_in_region(triangle_region(two_overlapping, 0), point, two_overlapping) is expect


def test_outer_cycles_are_clockwise(two_overlapping):
    s = two_overlapping
    for t in range(s.n):
        assert cycle_area2(s, triangle_region(s, t).cycles[0]) < 0


def halves(scene):
    h = scene.n // 2
    return naive_union(scene, range(h)), naive_union(scene, range(h, scene.n))


@pytest.mark.parametrize("seed", range(6))
def test_boolean_laws_on_sampled_points(seed):
    s = gen_random(12, seed)
    a, b = halves(s)
    u, i, d = ops(s, a, b)
    rng = np.random.default_rng(seed)
    checked = 0
    for _ in range(200):
        p = tuple(Fraction(int(v), 10**4) for v in rng.integers(-500, 10500, 2))
        la, lb = point_in_region(a, p, s), point_in_region(b, p, s)
        if Location.BOUNDARY in (la, lb):
            continue
        ia, ib = la is Location.INSIDE, lb is Location.INSIDE
        assert (point_in_region(u, p, s) is Location.INSIDE) == (ia or ib)
        assert (point_in_region(i, p, s) is Location.INSIDE) == (ia and ib)
        assert (point_in_region(d, p, s) is Location.INSIDE) == (ia and not ib)
        checked += 1
    assert checked > 150


@pytest.mark.parametrize("seed", range(4))
def test_union_commutes_and_associates(seed):
    s = gen_random(9, 100 + seed)
    r = [naive_union(s, range(k, k + 3)) for k in (0, 3, 6)]

    def uni(p, q):
        return region_union(p, q, boundary_crossings(p, q, s), s)

    assert same_region(uni(r[0], r[1]), uni(r[1], r[0]), s)
    assert same_region(uni(uni(r[0], r[1]), r[2]), uni(r[0], uni(r[1], r[2])), s)


@pytest.mark.parametrize("seed", range(4))
def test_no_vertex_is_invented(seed):
    s = gen_random(16, 200 + seed)
    a, b = halves(s)
    x = boundary_crossings(a, b, s)
    allowed = a.vertices() | b.vertices() | set(x)
    for r in ops(s, a, b):
        assert r.vertices() <= allowed


@pytest.mark.parametrize("seed", range(6))
def test_crossings_match_all_pairs(seed):
    s = gen_random(32, 300 + seed)
    a, b = halves(s)
    assert boundary_crossings(a, b, s) == all_pairs_crossings(a, b, s)


def test_supplied_crossings_are_honoured(two_overlapping):
    s = two_overlapping
    a, b = triangle_region(s, 0), triangle_region(s, 1)
    x = boundary_crossings(a, b, s)
    assert same_region(region_union(a, b, x, s), overlay(a, b, s)["union"], s)
