from fractions import Fraction

import pytest

from hsr.errors import DegeneracyDetected, DegenerateRay, DepthOrderViolation, NoIntersection, SceneFormatError
from hsr.gen import gen_random, scene_from_2d
from hsr.geometry import (
    Corner,
    Crossing,
    Orientation,
    ProjectionPlane,
    Scene,
    check_general_position,
    load_scene,
    orientation,
    pad_to_power_of_two,
    project,
    resolve_vertex,
    save_scene,
    validate_depth_order,
)
from hsr.oracle import trivial_viewshed

from conftest import tri2d

UNIT = ((0, 0, 1), (1, 0, 1), (0, 1, 1))


def plane_scene(viewpoint, direction):
    plane = ProjectionPlane.facing(viewpoint, direction)
    tri = tuple(tuple(c + 3 * d for c, d in zip(p, direction)) for p in ((1, 0, 0), (0, 1, 0), (1, 1, 0)))
    return Scene(viewpoint, [tri], plane=plane)


def test_project_central_scaling():
    s = plane_scene((0, 0, 0), (0, 0, 1))
    assert project(s, (2, 2, 2)) == (1, 1)
    assert project(s, (0, 0, 3)) == (0, 0)


def test_project_plane_behind_viewpoint():
    s = plane_scene((0, 0, 5), (0, 0, -1))
    assert project(s, (2, 0, 3)) == (1, 0)


def test_project_rejects_the_viewpoint():
    s = plane_scene((0, 0, 0), (0, 0, 1))
    with pytest.raises(DegenerateRay):
        project(s, (0, 0, 0))


def test_orientation_examples():
    assert orientation((0, 0), (1, 0), (0, 1)) is Orientation.LEFT
    assert orientation((0, 0), (1, 0), (2, 0)) is Orientation.COLLINEAR
    assert orientation((0, 0), (0, 1), (1, 0)) is Orientation.RIGHT


def test_orientation_is_exact_near_collinear():
    eps = Fraction(1, 10**30)
    assert orientation((0, 0), (1, 1), (2, 2 + eps)) is Orientation.LEFT


def test_resolve_corner_is_the_projection():
    s = gen_random(3, 2)
    assert resolve_vertex(s, Corner(1, 0)) == project(s, s.triangles[1][0])


def test_resolve_symmetric_x():
    s = scene_from_2d([tri2d((0, 0), (2, 2), (3, 0)), tri2d((0, 2), (2, 0), (-1, -2))])
    assert resolve_vertex(s, Crossing(0, 3)) == (1, 1)


def test_resolve_axis_cross():
    s = scene_from_2d([tri2d((0, 0), (4, 0), (2, -3)), tri2d((1, -1), (1, 3), (-2, 1))])
    assert resolve_vertex(s, Crossing(0, 3)) == (1, 0)


def test_resolve_non_crossing_edges():
    s = scene_from_2d([tri2d((0, 0), (1, 0), (0, 1)), tri2d((5, 5), (6, 5), (5, 6))])
    with pytest.raises(NoIntersection):
        resolve_vertex(s, Crossing(0, 3))


def test_crossing_lies_on_both_edges():
    s = gen_random(16, 4)
    found = 0
    for e1 in range(s.n_edges):
        for e2 in range(e1 + 1, s.n_edges):
            if e1 // 3 != e2 // 3 and s.edges_cross(e1, e2):
                p = resolve_vertex(s, Crossing(e1, e2))
                for e in (e1, e2):
                    a, b = (s.point(c) for c in s.edge_corners(e))
                    assert orientation(a, b, p) is Orientation.COLLINEAR
                    assert min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
                found += 1
    assert found > 0


def test_depth_order_disjoint_any_order():
    a, b = tri2d((0, 0), (1, 0), (0, 1)), tri2d((5, 5), (6, 5), (5, 6))
    validate_depth_order(scene_from_2d([a, b]))
    validate_depth_order(scene_from_2d([b, a]))


def test_depth_order_violation_names_the_pair():
    near = ((0, 0, 1), (2, 0, 1), (0, 2, 1))
    far = ((0, 0, 2), (4, 0, 2), (0, 4, 2))
    s = Scene((0, 0, 0), [near, far])
    with pytest.raises(DepthOrderViolation) as info:
        validate_depth_order(s)
    assert (info.value.far, info.value.near) == (0, 1)
    assert validate_depth_order(Scene((0, 0, 0), [far, near]))


def test_depth_order_single_triangle():
    assert validate_depth_order(Scene((0, 0, 0), [UNIT]))


@pytest.mark.parametrize("n,padded,extra", [(4, 4, 0), (3, 4, 1), (5, 8, 3), (1, 1, 0)])
def test_padding_sizes(n, padded, extra):
    s, m = pad_to_power_of_two(gen_random(n, 1))
    assert (s.n, m, s.n_padding) == (padded, extra, extra)


@pytest.mark.parametrize("n", [3, 5, 6, 7])
def test_padding_preserves_the_viewshed(n):
    s = gen_random(n, n)
    p, _ = pad_to_power_of_two(s)
    check_general_position(p)
    validate_depth_order(p)
    before, _ = trivial_viewshed(s)
    after, _ = trivial_viewshed(p)
    assert before.to_json(exact=True) == after.to_json(exact=True)


def test_padding_is_hidden_behind_the_farthest_triangle():
    s, m = pad_to_power_of_two(gen_random(5, 9))
    vm, _ = trivial_viewshed(s.with_triangles(s.triangles, n_padding=0))
    for t in range(m):
        assert vm.entries[t] == []


def test_touching_edges_are_degenerate():
    s = scene_from_2d([tri2d((0, 0), (2, 0), (0, 2)), tri2d((1, 1), (3, 1), (3, 3))])
    with pytest.raises(DegeneracyDetected):
        check_general_position(s)


def test_flat_projection_rejected():
    with pytest.raises(DegeneracyDetected):
        Scene((0, 0, 0), [((0, 0, 1), (1, 1, 1), (2, 2, 1))])


def test_scene_file_round_trip(tmp_path):
    s = gen_random(8, 42)
    path = tmp_path / "s.json"
    save_scene(s, path)
    assert load_scene(path) == s


def test_scene_file_parses_decimals_exactly(tmp_path):
    path = tmp_path / "s.json"
    path.write_text('{"viewpoint": [0, 0, 0], "triangles": [[0.1, 0, 1, 1, 0, 1, 0, "0.3", 1]]}')
    s = load_scene(path)
    assert s.triangles[0][0][0] == Fraction(1, 10)
    assert s.triangles[0][2][1] == Fraction(3, 10)


def test_malformed_scene_file(tmp_path):
    path = tmp_path / "s.json"
    path.write_text('{"viewpoint": [0, 0, 0], "triangles": [[0, 0, 1, 1, 0, 1]]}')
    with pytest.raises(SceneFormatError):
        load_scene(path)


def test_back_projection_lands_on_the_plane():
    s = gen_random(4, 3)
    for t in range(s.n):
        A, B, C = s.triangles[t]
        for code in s.corners(t):
            assert s.back_project(t, *s.point(code)) == s.triangles[t][code % 3]
        x, y = s.point(3 * t)
        q = s.back_project(t, x + Fraction(1, 1000), y)
        n = [
            (B[1] - A[1]) * (C[2] - A[2]) - (B[2] - A[2]) * (C[1] - A[1]),
            (B[2] - A[2]) * (C[0] - A[0]) - (B[0] - A[0]) * (C[2] - A[2]),
            (B[0] - A[0]) * (C[1] - A[1]) - (B[1] - A[1]) * (C[0] - A[0]),
        ]
        assert sum(n[k] * (q[k] - A[k]) for k in range(3)) == 0
