"""Boolean operations on regions bounded by fragments of projected edges.

A :class:`Region` is a list of closed cycles of vertex refs.  Interior
lies to the right of every cycle, so outer boundaries run clockwise and
holes counter-clockwise.  Consecutive vertices always share exactly one
triangle edge, and a vertex is only kept where the boundary turns from
one edge onto another.

Operations overlay the two boundaries, split fragments where they meet,
classify every piece against the other region and stitch the kept pieces
back into cycles.  Where several cycles touch at one vertex, each
interior wedge around it gets its own pair of boundary rays.
"""

import enum
import functools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DegeneracyDetected, NoIntersection
from .geometry import common_edge, overlapping_pairs, to_fraction

SMALL = 64


class Location(str, enum.Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    BOUNDARY = "on-boundary"


@dataclass
class Region:
    cycles: list = field(default_factory=list)

    def __bool__(self):
        return bool(self.cycles)

    def __len__(self):
        return sum(len(c) for c in self.cycles)

    def vertices(self):
        return {v for c in self.cycles for v in c}

    def fragments(self, scene):
        n = scene.n
        out = []
        for cyc in self.cycles:
            k = len(cyc)
            for i in range(k):
                u, v = cyc[i], cyc[(i + 1) % k]
                out.append((u, v, common_edge(u, v, n)))
        return out

    def edges(self, scene):
        return {e for _, _, e in self.fragments(scene)}

    def triangles(self, scene):
        return {e // 3 for e in self.edges(scene)}


def triangle_region(scene, t):
    """The projected triangle t as a clockwise single-cycle region."""
    return Region([tuple(start for start, _, _ in scene.cw_edges(t))])


# --------------------------------------------------------------------------
# crossings


def _between(scene, e, u, v, p):
    """True iff p lies strictly between u and v on edge e."""
    if p == u or p == v:
        return False
    s1 = scene.along(e, u, p)
    return s1 != 0 and s1 == scene.along(e, p, v)


def _candidates(scene, fa, fb):
    if len(fa) + len(fb) <= SMALL:
        for i in range(len(fa)):
            for j in range(len(fb)):
                yield i, j
        return
    boxes_a = [scene.edge_box(e) for _, _, e in fa]
    boxes_b = [scene.edge_box(e) for _, _, e in fb]
    red = [(b[0], b[1], i) for i, b in enumerate(boxes_a)]
    blue = [(b[0], b[1], j) for j, b in enumerate(boxes_b)]
    for i, j in overlapping_pairs(red, blue):
        ba, bb = boxes_a[i], boxes_b[j]
        if ba[3] >= bb[2] and bb[3] >= ba[2]:
            yield i, j


def _proper_crossings(scene, fa, fb):
    """``(code, i, j)`` for fragments crossing at a point interior to both."""
    n = scene.n
    cache = {}
    out = []
    for i, j in _candidates(scene, fa, fb):
        u, v, ea = fa[i]
        s, t, eb = fb[j]
        if ea // 3 == eb // 3:
            continue
        key = (ea, eb) if ea < eb else (eb, ea)
        hit = cache.get(key)
        if hit is None:
            hit = cache[key] = scene.edges_cross(ea, eb)
        if not hit:
            continue
        x = scene.n_edges * (1 + key[0]) + key[1]
        if _between(scene, ea, u, v, x) and _between(scene, eb, s, t, x):
            out.append((x, i, j))
    return out


def _fragments(region, scene):
    return region.fragments(scene) if isinstance(region, Region) else list(region)


def boundary_crossings(region_a, region_b, scene):
    """Refs of all proper crossings between the two boundaries."""
    fa, fb = _fragments(region_a, scene), _fragments(region_b, scene)
    return sorted({x for x, _, _ in _proper_crossings(scene, fa, fb)})


def all_pairs_crossings(region_a, region_b, scene):
    """Quadratic reference version of :func:`boundary_crossings`."""
    fa, fb = _fragments(region_a, scene), _fragments(region_b, scene)
    out = set()
    for u, v, ea in fa:
        for s, t, eb in fb:
            if ea // 3 == eb // 3 or not scene.edges_cross(ea, eb):
                continue
            x = scene.n_edges * (1 + min(ea, eb)) + max(ea, eb)
            if _between(scene, ea, u, v, x) and _between(scene, eb, s, t, x):
                out.add(x)
    return sorted(out)


# --------------------------------------------------------------------------
# overlay


def _assign_crossings(scene, fa, fb, crossings):
    """Locate supplied crossing refs on the fragments they split."""
    by_edge_a, by_edge_b = {}, {}
    for i, (_, _, e) in enumerate(fa):
        by_edge_a.setdefault(e, []).append(i)
    for j, (_, _, e) in enumerate(fb):
        by_edge_b.setdefault(e, []).append(j)
    out = []
    for x in crossings:
        e1, e2 = divmod(x - scene.n_edges, scene.n_edges)
        ia = [i for e in (e1, e2) for i in by_edge_a.get(e, ()) if _between(scene, e, fa[i][0], fa[i][1], x)]
        ib = [j for e in (e1, e2) for j in by_edge_b.get(e, ()) if _between(scene, e, fb[j][0], fb[j][1], x)]
        if len(ia) != 1 or len(ib) != 1:
            raise NoIntersection(f"crossing {x} does not split both boundaries")
        out.append((x, ia[0], ib[0]))
    return out


def _split(scene, frags, splits):
    pieces = []
    for i, (u, v, e) in enumerate(frags):
        pts = splits.get(i)
        if not pts:
            pieces.append((u, v, e))
            continue
        sgn = scene.along(e, u, v)
        pts = sorted(pts, key=functools.cmp_to_key(lambda p, q: scene.along(e, q, p) * sgn))
        chain = [u] + pts + [v]
        for p, q in zip(chain, chain[1:]):
            pieces.append((p, q, e))
    return pieces


def _classify(scene, pieces, other):
    """Inside-flags of each piece's midpoint against the fragments ``other``."""
    if not pieces:
        return []
    boxes_p = [scene.edge_box(e) for _, _, e in pieces]
    boxes_o = [scene.edge_box(e) for _, _, e in other]
    near = [[] for _ in pieces]
    if len(pieces) + len(other) <= SMALL:
        for i in range(len(pieces)):
            near[i] = list(other)
    else:
        red = [(b[0], b[1], i) for i, b in enumerate(boxes_p)]
        blue = [(b[0], b[1], j) for j, b in enumerate(boxes_o)]
        for i, j in overlapping_pairs(red, blue):
            if boxes_o[j][3] >= boxes_p[i][2]:
                near[i].append(other[j])
    return [scene.ray_parity(u, v, near[i]) == 1 for i, (u, v, _) in enumerate(pieces)]


def _stitch(scene, directed):
    """Join directed pieces ``(p, q, e)`` into cycles, wedge by wedge."""
    out_of = {}
    fwd = []
    for k, (p, q, e) in enumerate(directed):
        out_of.setdefault(p, []).append(k)
        fwd.append(scene.along(e, p, q))
    used = [False] * len(directed)

    def ccw_from(back, d):
        # (half, vector) key for the counter-clockwise angle from back to d
        cr = back[0] * d[1] - back[1] * d[0]
        dt = back[0] * d[0] + back[1] * d[1]
        return 0 if cr > 0 or (cr == 0 and dt > 0) else 1

    def pick(k_in):
        p, q, e = directed[k_in]
        outs = out_of.get(q)
        if not outs:
            raise DegeneracyDetected(f"boundary dead-ends at vertex {q}")
        if len(outs) == 1:
            return outs[0]
        dx, dy = scene.direction(e, fwd[k_in] > 0)
        back = (-dx, -dy)
        best, best_half, best_dir = None, None, None
        for k in outs:
            d = scene.direction(directed[k][2], fwd[k] > 0)
            h = ccw_from(back, d)
            if best is None or h < best_half or (
                h == best_half and best_dir[0] * d[1] - best_dir[1] * d[0] < 0
            ):
                best, best_half, best_dir = k, h, d
        return best

    cycles = []
    for start in range(len(directed)):
        if used[start]:
            continue
        verts, edges = [], []
        k = start
        while True:
            if used[k]:
                raise DegeneracyDetected("boundary pieces do not form cycles")
            used[k] = True
            verts.append(directed[k][0])
            edges.append(directed[k][2])
            k = pick(k)
            if k == start:
                break
        m = len(verts)
        cyc = tuple(verts[i] for i in range(m) if edges[i - 1] != edges[i])
        if len(cyc) < 3:
            raise DegeneracyDetected("zero-area sliver in overlay result")
        cycles.append(cyc)
    return cycles


def overlay(region_a, region_b, scene, ops=("union",), crossings=None):
    """Compute several boolean combinations of two regions in one pass.

    Returns a dict mapping each requested op (``union``,
    ``intersection``, ``difference``) to a Region.
    """
    fa, fb = region_a.fragments(scene), region_b.fragments(scene)
    if crossings is None:
        found = _proper_crossings(scene, fa, fb)
    else:
        found = _assign_crossings(scene, fa, fb, crossings)
    split_a, split_b = {}, {}
    for x, i, j in found:
        split_a.setdefault(i, []).append(x)
        split_b.setdefault(j, []).append(x)

    # collinear overlaps: fragments on the same edge split at each other's ends
    on_a, on_b = {}, {}
    for i, (_, _, e) in enumerate(fa):
        on_a.setdefault(e, []).append(i)
    for j, (_, _, e) in enumerate(fb):
        on_b.setdefault(e, []).append(j)
    for e in on_a.keys() & on_b.keys():
        for i in on_a[e]:
            u, v, _ = fa[i]
            for j in on_b[e]:
                s, t, _ = fb[j]
                for p in (s, t):
                    if _between(scene, e, u, v, p):
                        split_a.setdefault(i, []).append(p)
                for p in (u, v):
                    if _between(scene, e, s, t, p):
                        split_b.setdefault(j, []).append(p)

    pa = _split(scene, fa, split_a)
    pb = _split(scene, fb, split_b)
    key_b = {}
    for j, (p, q, e) in enumerate(pb):
        key_b[(e, min(p, q), max(p, q))] = j
    shared_a = {}
    shared_b = set()
    for i, (p, q, e) in enumerate(pa):
        j = key_b.get((e, min(p, q), max(p, q)))
        if j is not None:
            shared_a[i] = pb[j][0] == p
            shared_b.add(j)
    free_a = [i for i in range(len(pa)) if i not in shared_a]
    free_b = [j for j in range(len(pb)) if j not in shared_b]
    in_b = dict(zip(free_a, _classify(scene, [pa[i] for i in free_a], fb)))
    in_a = dict(zip(free_b, _classify(scene, [pb[j] for j in free_b], fa)))

    result = {}
    for op in ops:
        keep = []
        if op == "union":
            keep += [pa[i] for i in free_a if not in_b[i]]
            keep += [pb[j] for j in free_b if not in_a[j]]
            keep += [pa[i] for i, same in shared_a.items() if same]
        elif op == "intersection":
            keep += [pa[i] for i in free_a if in_b[i]]
            keep += [pb[j] for j in free_b if in_a[j]]
            keep += [pa[i] for i, same in shared_a.items() if same]
        elif op == "difference":
            keep += [pa[i] for i in free_a if not in_b[i]]
            keep += [(q, p, e) for j in free_b if in_a[j] for p, q, e in (pb[j],)]
            keep += [pa[i] for i, same in shared_a.items() if not same]
        else:
            raise ValueError(f"unknown boolean op {op!r}")
        result[op] = Region(_stitch(scene, keep))
    return result


def region_union(region_a, region_b, crossings, scene):
    return overlay(region_a, region_b, scene, ("union",), crossings)["union"]


def region_intersection(region_a, region_b, crossings, scene):
    return overlay(region_a, region_b, scene, ("intersection",), crossings)["intersection"]


def region_difference(region_a, region_b, crossings, scene):
    return overlay(region_a, region_b, scene, ("difference",), crossings)["difference"]


# --------------------------------------------------------------------------
# exact queries on explicit coordinates


def point_in_region(region, point, scene):
    """Classify a 2D point against a region by exact ray-crossing parity."""
    x, y = (to_fraction(c) for c in point)
    inside = False
    for u, v, _ in region.fragments(scene):
        (ux, uy), (vx, vy) = scene.point(u), scene.point(v)
        cr = (vx - ux) * (y - uy) - (vy - uy) * (x - ux)
        if cr == 0 and min(ux, vx) <= x <= max(ux, vx) and min(uy, vy) <= y <= max(uy, vy):
            return Location.BOUNDARY
        if (ux <= x < vx) or (vx <= x < ux):
            # crossing above the point?
            if (cr < 0) == (ux < vx):
                inside = not inside
    return Location.INSIDE if inside else Location.OUTSIDE


def cycle_area2(scene, cycle):
    """Twice the signed area (negative for clockwise)."""
    pts = [scene.point(v) for v in cycle]
    return sum(p[0] * q[1] - q[0] * p[1] for p, q in zip(pts, pts[1:] + pts[:1]))


def region_area(region, scene):
    return -sum((cycle_area2(scene, c) for c in region.cycles), Fraction(0)) / 2


def is_outer(scene, cycle):
    return cycle_area2(scene, cycle) < 0


def normalize_cycle(scene, cycle):
    pts = [scene.point(v) for v in cycle]
    k = min(range(len(cycle)), key=lambda i: pts[i])
    return tuple(cycle[k:]) + tuple(cycle[:k])


def normalize_cycles(scene, cycles):
    normed = [normalize_cycle(scene, c) for c in cycles]
    return sorted(normed, key=lambda c: [scene.point(v) for v in c])


def same_region(a, b, scene):
    return normalize_cycles(scene, a.cycles) == normalize_cycles(scene, b.cycles)
