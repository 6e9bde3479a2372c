"""Scene generators: random, disjoint, heavy-crossing, and a small fixed example.

Every generator places triangle t in the plane z = z_t with z_t
decreasing in t, views from the origin, and builds 3D corners as
z_t * (x, y, 1) so the projection onto z = 1 returns (x, y) exactly.
"""

import math
from fractions import Fraction

import numpy as np

from .errors import DegeneracyDetected, UnsupportedSize
from .geometry import ProjectionPlane, Scene, check_general_position

GRID = 10**6
MAX_REJECTIONS = 10**4


def _q(v):
    return Fraction(int(round(v * GRID)), GRID)


def _lift(tris2d):
    n = len(tris2d)
    out = []
    for t, tri in enumerate(tris2d):
        z = 1 + Fraction(n - t, n)
        out.append(tuple((x * z, y * z, z) for x, y in tri))
    return out


def _area2(tri):
    (ax, ay), (bx, by), (cx, cy) = tri
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def scene_from_2d(tris2d):
    """Depth-ordered scene (first = farthest) whose projections are ``tris2d``."""
    tris2d = [tuple((Fraction(x), Fraction(y)) for x, y in tri) for tri in tris2d]
    return Scene((0, 0, 0), _lift(tris2d), plane=ProjectionPlane.facing((0, 0, 0), (0, 0, 1)))


def _build(draw, rng):
    for _ in range(MAX_REJECTIONS):
        tris = draw(rng)
        try:
            scene = scene_from_2d(tris)
            check_general_position(scene)
        except DegeneracyDetected:
            continue
        return scene
    raise DegeneracyDetected("generator exceeded the rejection budget")


def _small_triangle(rng, cx, cy, r):
    while True:
        ang = np.sort(rng.uniform(0, 2 * math.pi, 3))
        rad = r * rng.uniform(0.4, 1.0, 3)
        tri = tuple(
            (_q(cx + rad[k] * math.cos(ang[k])), _q(cy + rad[k] * math.sin(ang[k]))) for k in range(3)
        )
        if abs(float(_area2(tri))) > r * r / 20:
            return tri


def gen_random(n, seed):
    """n random small triangles in the unit square, overlapping a few neighbours each."""
    if n < 1:
        raise UnsupportedSize(n)
    r = 0.9 / math.sqrt(n)

    def draw(rng):
        return [_small_triangle(rng, *rng.uniform(0, 1, 2), r) for _ in range(n)]

    return _build(draw, np.random.default_rng(seed))


def gen_disjoint(n, seed):
    """One triangle per cell of a square grid; projections never meet."""
    if n < 1:
        raise UnsupportedSize(n)
    side = math.ceil(math.sqrt(n))
    cell = 1.0 / side

    def draw(rng):
        cells = rng.permutation(side * side)[:n]
        tris = []
        for c in cells.tolist():
            i, j = divmod(c, side)
            cx, cy = (i + 0.5) * cell, (j + 0.5) * cell
            tris.append(_small_triangle(rng, cx, cy, 0.45 * cell))
        return tris

    return _build(draw, np.random.default_rng(seed))


CLUSTER = 8


def _needle(cx, cy, angle, length, width, offset):
    """Thin triangle along direction ``angle``, shifted sideways by ``offset``."""
    dx, dy = math.cos(angle), math.sin(angle)
    nx, ny = -dy, dx
    bx, by = cx + offset * nx - 0.5 * length * dx, cy + offset * ny - 0.5 * length * dy
    tip = (_q(bx + length * dx), _q(by + length * dy))
    return (
        (_q(bx + 0.5 * width * nx), _q(by + 0.5 * width * ny)),
        tip,
        (_q(bx - 0.5 * width * nx), _q(by - 0.5 * width * ny)),
    )


def gen_worst_case(n, seed=0):
    """Clusters of eight long needles in which every pair crosses.

    A cluster's union carries about 2m^2 vertices for m needles, so each
    level up to the cluster size roughly doubles the per-level boundary
    complexity; clusters sit in disjoint grid cells so every level above
    keeps it.  K/U therefore grows with log n while U stays linear.
    """
    if n < CLUSTER or n & (n - 1):
        raise UnsupportedSize(f"worst-case family needs a power of two >= {CLUSTER}, got {n}")
    groups = n // CLUSTER
    side = math.ceil(math.sqrt(groups))
    cell = 1.0 / side

    def draw(rng):
        tris = []
        for g in range(groups):
            i, j = divmod(g, side)
            cx, cy = (i + 0.5) * cell, (j + 0.5) * cell
            length = 0.9 * cell
            base = rng.uniform(0, math.pi)
            for k in range(CLUSTER):
                # interleave directions so every tree level mixes them
                slot = int(format(k, "03b")[::-1], 2)
                angle = base + math.pi * slot / CLUSTER + rng.uniform(-0.05, 0.05)
                offset = rng.uniform(-0.12, 0.12) * cell
                tris.append(_needle(cx, cy, angle, length, 0.015 * cell, offset))
        return tris

    return _build(draw, np.random.default_rng(seed))


def two_pairs_scene():
    """Two crossing pairs whose unions overlap; one corner is swallowed at level 2."""
    tris = [
        ((0, 0), (6, 0), (0, 6)),
        ((4, -1), (7, 3), (2, 3)),
        ((5, 2), (11, 2), (9, 8)),
        ((10, 1), (12, 7), (6, 6)),
    ]
    return scene_from_2d([tuple((Fraction(x, 2), Fraction(y, 2)) for x, y in t) for t in tris])


FAMILIES = {
    "random": gen_random,
    "disjoint": gen_disjoint,
    "worst": lambda n, seed=0: gen_worst_case(n, seed),
}
