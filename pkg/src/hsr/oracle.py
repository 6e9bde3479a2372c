"""Brute-force ground truth: arrangement viewshed and iterated union.

Nothing here touches the catalog or the overlay stitching; the viewshed
oracle builds the full planar arrangement of all projected edges, picks
the frontmost triangle per face by comparing ray depths, and traces the
boundary of each triangle's visible faces.
"""

import functools

from .geometry import common_edge, crossing_code
from .overlay import Region, boundary_crossings, region_union, triangle_region
from .vismap import VisibilityMap, assemble_polygons


def _half(d):
    return 0 if d[1] > 0 or (d[1] == 0 and d[0] > 0) else 1


def _ccw_cmp(a, b):
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return ha - hb
    c = a[0] * b[1] - a[1] * b[0]
    return -1 if c > 0 else (1 if c < 0 else 0)


class Arrangement:
    """Planar arrangement of every projected triangle edge."""

    def __init__(self, scene):
        self.scene = scene
        n = scene.n
        ne = scene.n_edges
        on_edge = {e: [scene.edge_corners(e)[0], scene.edge_corners(e)[1]] for e in range(ne)}
        self.crossings = 0
        for e1 in range(ne):
            for e2 in range(e1 + 1, ne):
                if e1 // 3 == e2 // 3:
                    continue
                b1, b2 = scene.edge_box(e1), scene.edge_box(e2)
                if b1[1] < b2[0] or b2[1] < b1[0] or b1[3] < b2[2] or b2[3] < b1[2]:
                    continue
                if scene.edges_cross(e1, e2):
                    x = crossing_code(e1, e2, n)
                    on_edge[e1].append(x)
                    on_edge[e2].append(x)
                    self.crossings += 1

        # half-edges: (tail, head, edge); twins are adjacent indices
        self.tail, self.head, self.edge = [], [], []
        out = {}
        for e, pts in on_edge.items():
            pts.sort(key=functools.cmp_to_key(lambda p, q: -scene.along(e, p, q)))
            for p, q in zip(pts, pts[1:]):
                for a, b in ((p, q), (q, p)):
                    out.setdefault(a, []).append(len(self.tail))
                    self.tail.append(a)
                    self.head.append(b)
                    self.edge.append(e)
        self.rot = {}
        self.slot = {}
        for v, hs in out.items():
            hs.sort(key=functools.cmp_to_key(lambda g, h: _ccw_cmp(self._vec(g), self._vec(h))))
            self.rot[v] = hs
            for i, h in enumerate(hs):
                self.slot[h] = i
        self._faces()

    @staticmethod
    def twin(h):
        return h ^ 1

    def _vec(self, h):
        dx, dy = self.scene._dir[self.edge[h]]
        s = self.scene.along(self.edge[h], self.tail[h], self.head[h])
        return (s * dx, s * dy)

    def cw_next(self, h):
        """Outgoing half-edge clockwise-adjacent to h around its tail."""
        hs = self.rot[self.tail[h]]
        return hs[(self.slot[h] - 1) % len(hs)]

    def next(self, h):
        return self.cw_next(self.twin(h))

    def _faces(self):
        self.face = [-1] * len(self.tail)
        self.face_start = []
        for h in range(len(self.tail)):
            if self.face[h] >= 0:
                continue
            f = len(self.face_start)
            self.face_start.append(h)
            g = h
            while self.face[g] < 0:
                self.face[g] = f
                g = self.next(g)

    def midpoint(self, h):
        p, q = self.scene.point(self.tail[h]), self.scene.point(self.head[h])
        return ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)


def _inside(scene, t, pt):
    """Strict point-in-triangle with Fractions."""
    a, b, c = (scene.point(k) for k in scene.corners(t))
    signs = set()
    for p, q in ((a, b), (b, c), (c, a)):
        d = (q[0] - p[0]) * (pt[1] - p[1]) - (q[1] - p[1]) * (pt[0] - p[0])
        if d == 0:
            return False
        signs.add(d > 0)
    return len(signs) == 1


def _front_of_faces(arr):
    scene = arr.scene
    front = []
    for h in arr.face_start:
        e = arr.edge[h]
        own = e // 3
        mid = arr.midpoint(h)
        covering = []
        # owner covers the left face iff its interior is on the left of h
        cw_forward = scene.cw_sign[own] > 0
        goes_forward = scene.along(e, arr.tail[h], arr.head[h]) > 0
        if cw_forward != goes_forward:
            covering.append(own)
        for s in range(scene.n):
            if s != own and _inside(scene, s, mid):
                covering.append(s)
        if not covering:
            front.append(None)
            continue
        front.append(min(covering, key=lambda s: scene.depth_at(s, *mid)))
    return front


def _trace(arr, front, t):
    face = arr.face
    bound = [
        h
        for h in range(len(arr.tail))
        if front[face[h]] == t and front[face[arr.twin(h)]] != t
    ]
    boundary = set(bound)
    used = set()
    cycles = []
    n = arr.scene.n
    for h0 in bound:
        if h0 in used:
            continue
        cyc = []
        h = h0
        while h not in used:
            used.add(h)
            cyc.append(arr.tail[h])
            g = arr.cw_next(arr.twin(h))
            while g not in boundary:
                g = arr.cw_next(g)
            h = g
        # faces lie left of the traced chain; flip to interior-on-right
        cyc.reverse()
        cycles.append(_merge_collinear(cyc, n))
    return cycles


def _merge_collinear(cyc, n):
    k = len(cyc)
    keep = [
        cyc[i]
        for i in range(k)
        if common_edge(cyc[i - 1], cyc[i], n) != common_edge(cyc[i], cyc[(i + 1) % k], n)
    ]
    return tuple(keep)


def trivial_viewshed(scene):
    """Visibility map by brute force; also returns the pairwise crossing count."""
    arr = Arrangement(scene)
    front = _front_of_faces(arr)
    vmap = VisibilityMap(scene)
    for t in range(scene.n_padding, scene.n):
        vmap.entries[t - scene.n_padding] = assemble_polygons(scene, _trace(arr, front, t))
    return vmap, arr.crossings


def naive_union(scene, triangles=None):
    """Union of projected triangles by iterated pairwise union."""
    order = range(scene.n) if triangles is None else triangles
    acc = Region()
    for t in order:
        r = triangle_region(scene, t)
        acc = r if not acc else region_union(acc, r, boundary_crossings(acc, r, scene), scene)
    return acc

