"""Scene model, central projection and the exact predicate kernel.

All geometry is exact.  Input coordinates become ``Fraction`` objects;
projected corners are held as homogeneous integer triples ``(X, Y, W)``
with ``W > 0`` so that every predicate reduces to integer determinants.

Vertices are never stored as coordinates.  A vertex is a packed integer
*ref*: ``3*t + c`` names corner ``c`` of triangle ``t`` and
``3n + a*3n + b`` (``a < b``) names the crossing of edges ``a`` and
``b``.  Edge ``3*t + c`` joins corners ``c`` and ``(c + 1) % 3`` of
triangle ``t``.  Kernel methods take refs, resolve them transiently and
return signs; while a :data:`METER` is enabled they report how many
real-valued cells they hold.
"""

import enum
import functools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import (
    DegenerateRay,
    DegeneracyDetected,
    DepthOrderViolation,
    NoIntersection,
    SceneFormatError,
)


# --------------------------------------------------------------------------
# real-cell instrumentation


class RealCellMeter:
    """Counts simultaneously live real-valued cells held by kernel calls."""

    def __init__(self):
        self.enabled = False
        self.live = 0
        self.peak = 0

    def hold(self, k):
        self.live += k
        if self.live > self.peak:
            self.peak = self.live

    def release(self, k):
        self.live -= k

    def reset(self):
        self.live = 0
        self.peak = 0

    def __enter__(self):
        self.reset()
        self.enabled = True
        return self

    def __exit__(self, *exc):
        self.enabled = False
        return False


METER = RealCellMeter()


# --------------------------------------------------------------------------
# numbers and small vector helpers


def to_fraction(value):
    """Parse a coordinate exactly (decimal strings, ``"p/q"``, ints, floats)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise SceneFormatError(f"not a coordinate: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise SceneFormatError(f"non-finite coordinate {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise SceneFormatError(f"bad coordinate {value!r}") from exc
    raise SceneFormatError(f"not a coordinate: {value!r}")


def _sub(p, q):
    return (p[0] - q[0], p[1] - q[1], p[2] - q[2])


def _dot(p, q):
    return p[0] * q[0] + p[1] * q[1] + p[2] * q[2]


def _cross(p, q):
    return (
        p[1] * q[2] - p[2] * q[1],
        p[2] * q[0] - p[0] * q[2],
        p[0] * q[1] - p[1] * q[0],
    )


def _homogeneous(x, y):
    """Integer triple for the rational point (x, y)."""
    w = x.denominator * y.denominator // math.gcd(x.denominator, y.denominator)
    return (x.numerator * (w // x.denominator), y.numerator * (w // y.denominator), w)


def _sign(v):
    return (v > 0) - (v < 0)


class Orientation(enum.IntEnum):
    RIGHT = -1
    COLLINEAR = 0
    LEFT = 1


def orientation(a, b, c):
    """Exact turn direction of the rational points ``a -> b -> c``."""
    a, b, c = ([to_fraction(v) for v in p] for p in (a, b, c))
    det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return Orientation(_sign(det))


# --------------------------------------------------------------------------
# vertex refs


class Corner(NamedTuple):
    triangle: int
    corner: int

    def pack(self, n):
        return 3 * self.triangle + self.corner


class Crossing(NamedTuple):
    edge_a: int
    edge_b: int

    def pack(self, n):
        a, b = sorted((self.edge_a, self.edge_b))
        e = 3 * n
        return e + a * e + b


def pack_ref(ref, n):
    return ref if isinstance(ref, int) else ref.pack(n)


def unpack_ref(code, n):
    e = 3 * n
    if code < e:
        return Corner(*divmod(code, 3))
    return Crossing(*divmod(code - e, e))


def crossing_code(e1, e2, n):
    if e1 > e2:
        e1, e2 = e2, e1
    e = 3 * n
    return e + e1 * e + e2


def ref_edges(code, n):
    """The two edge ids meeting at a vertex."""
    e = 3 * n
    if code < e:
        t, c = divmod(code, 3)
        return (3 * t + (c + 2) % 3, code)
    return divmod(code - e, e)


def common_edge(u, v, n):
    a = ref_edges(u, n)
    b = ref_edges(v, n)
    for x in a:
        if x in b:
            return x
    raise NoIntersection(f"vertices {u} and {v} share no edge")


# --------------------------------------------------------------------------
# projection plane


@dataclass(frozen=True)
class ProjectionPlane:
    """Plane ``normal . (x - origin) = 0`` with an orthogonal frame (u, w).

    Plane coordinates ``(a, b)`` of a point Q satisfy
    ``Q = origin + a*u + b*w``.
    """

    origin: tuple
    normal: tuple
    u: tuple
    w: tuple

    @classmethod
    def facing(cls, viewpoint, direction):
        """Plane through ``viewpoint + direction``, orthogonal to it."""
        v = tuple(to_fraction(c) for c in viewpoint)
        d = tuple(to_fraction(c) for c in direction)
        if not any(d):
            raise DegenerateRay("zero view direction")
        axis = max(range(3), key=lambda k: abs(d[k]))
        if d[(axis + 1) % 3] == 0 and d[(axis + 2) % 3] == 0:
            others = [k for k in range(3) if k != axis]
            u = tuple(Fraction(int(k == others[0])) for k in range(3))
            w = tuple(Fraction(int(k == others[1])) for k in range(3))
        else:
            e = tuple(Fraction(int(k == (axis + 1) % 3)) for k in range(3))
            s = _dot(e, d) / _dot(d, d)
            u = tuple(e[k] - s * d[k] for k in range(3))
            w = _cross(d, u)
        origin = tuple(v[k] + d[k] for k in range(3))
        return cls(origin, d, u, w)

    def project(self, viewpoint, point):
        rel = _sub(point, viewpoint)
        if not any(rel):
            raise DegenerateRay("point coincides with the viewpoint")
        den = _dot(self.normal, rel)
        if den <= 0:
            raise DegenerateRay("point is not in front of the viewpoint")
        s = _dot(self.normal, _sub(self.origin, viewpoint)) / den
        q = tuple(viewpoint[k] + s * rel[k] - self.origin[k] for k in range(3))
        return (_dot(q, self.u) / _dot(self.u, self.u), _dot(q, self.w) / _dot(self.w, self.w))

    def lift(self, a, b):
        return tuple(self.origin[k] + a * self.u[k] + b * self.w[k] for k in range(3))


def choose_plane(viewpoint, triangles):
    """Default plane: faces the centroid, snapped to an axis when possible.

    Snapping to the dominant coordinate axis keeps projected coordinates
    small rationals; it is only used when every corner is strictly in
    front along that axis.
    """
    pts = [p for tri in triangles for p in tri]
    centroid = tuple(sum(p[k] for p in pts) / len(pts) for k in range(3))
    d = _sub(centroid, viewpoint)
    if not any(d):
        raise DegenerateRay("viewpoint at the scene centroid")
    axis = max(range(3), key=lambda k: abs(d[k]))
    snapped = tuple(Fraction(_sign(d[axis]) if k == axis else 0) for k in range(3))
    if all(_dot(snapped, _sub(p, viewpoint)) > 0 for p in pts):
        return ProjectionPlane.facing(viewpoint, snapped)
    return ProjectionPlane.facing(viewpoint, d)


# --------------------------------------------------------------------------
# scene


def _dense_rank(keys_cmp, count):
    """Dense ranks of ``count`` items under an exact comparison."""
    order = sorted(range(count), key=functools.cmp_to_key(keys_cmp))
    ranks = [0] * count
    r = 0
    for i, idx in enumerate(order):
        if i and keys_cmp(order[i - 1], idx) != 0:
            r += 1
        ranks[idx] = r
    return ranks


class Scene:
    """Viewpoint plus depth-ordered triangles (far first, nearest last).

    Construction projects every corner once; the projected corners, the
    edge lines and the per-corner coordinate ranks are functions of the
    read-only input and are treated as part of it.
    """

    def __init__(self, viewpoint, triangles, plane=None, n_padding=0):
        try:
            self.viewpoint = tuple(to_fraction(c) for c in viewpoint)
            self.triangles = tuple(
                tuple(tuple(to_fraction(c) for c in p) for p in tri) for tri in triangles
            )
        except TypeError as exc:
            raise SceneFormatError(str(exc)) from exc
        if len(self.viewpoint) != 3:
            raise SceneFormatError("viewpoint needs 3 coordinates")
        if not self.triangles:
            raise SceneFormatError("scene has no triangles")
        for tri in self.triangles:
            if len(tri) != 3 or any(len(p) != 3 for p in tri):
                raise SceneFormatError("each triangle needs three 3D points")
        self.n = len(self.triangles)
        self.n_edges = 3 * self.n
        self.n_padding = n_padding
        self.plane = plane if plane is not None else choose_plane(self.viewpoint, self.triangles)
        self._project_all()

    # -- construction helpers -------------------------------------------

    def _project_all(self):
        X, Y, W = [], [], []
        self.projected = []
        for t, tri in enumerate(self.triangles):
            pts = [self.plane.project(self.viewpoint, p) for p in tri]
            self.projected.append(tuple(pts))
            for x, y in pts:
                hx, hy, hw = _homogeneous(x, y)
                X.append(hx)
                Y.append(hy)
                W.append(hw)
        self._X, self._Y, self._W = X, Y, W
        self.cw_sign = []
        for t in range(self.n):
            o = self._orient_pts(self._pt(3 * t), self._pt(3 * t + 1), self._pt(3 * t + 2))
            if o == 0:
                raise DegeneracyDetected(f"triangle {t} projects to a segment or point")
            self.cw_sign.append(1 if o < 0 else -1)
        # per edge: supporting line and direction start -> end
        self._line = []
        self._dir = []
        for e in range(self.n_edges):
            p = self._pt(e)
            q = self._pt(3 * (e // 3) + (e % 3 + 1) % 3)
            self._line.append(_cross(p, q))
            self._dir.append((q[0] * p[2] - p[0] * q[2], q[1] * p[2] - p[1] * q[2]))
        cx = lambda i, j: _sign(self._X[i] * self._W[j] - self._X[j] * self._W[i])
        cy = lambda i, j: _sign(self._Y[i] * self._W[j] - self._Y[j] * self._W[i])
        self.xrank = _dense_rank(cx, self.n_edges)
        self.yrank = _dense_rank(cy, self.n_edges)

    # -- basic accessors -------------------------------------------------

    def corners(self, t):
        return (3 * t, 3 * t + 1, 3 * t + 2)

    def edge_corners(self, e):
        return (e, 3 * (e // 3) + (e % 3 + 1) % 3)

    def cw_edges(self, t):
        """``(start_corner, edge, forward)`` triples in clockwise order."""
        b = 3 * t
        if self.cw_sign[t] > 0:
            return ((b, b, True), (b + 1, b + 1, True), (b + 2, b + 2, True))
        return ((b, b + 2, False), (b + 2, b + 1, False), (b + 1, b, False))

    def edge_box(self, e):
        """Integer rank box ``(xlo, xhi, ylo, yhi)`` enclosing edge ``e``."""
        p, q = self.edge_corners(e)
        xr, yr = self.xrank, self.yrank
        return (min(xr[p], xr[q]), max(xr[p], xr[q]), min(yr[p], yr[q]), max(yr[p], yr[q]))

    def triangle_box(self, t):
        c = self.corners(t)
        xs = [self.xrank[i] for i in c]
        ys = [self.yrank[i] for i in c]
        return (min(xs), max(xs), min(ys), max(ys))

    def padding(self, t):
        return t < self.n_padding

    # -- point resolution (unmetered internals) -------------------------

    def _pt(self, code):
        if code < self.n_edges:
            return (self._X[code], self._Y[code], self._W[code])
        a, b = divmod(code - self.n_edges, self.n_edges)
        p = _cross(self._line[a], self._line[b])
        if p[2] == 0:
            raise NoIntersection(f"edges {a} and {b} are parallel")
        if p[2] < 0:
            p = (-p[0], -p[1], -p[2])
        return p

    @staticmethod
    def _orient_pts(a, b, c):
        return _sign(
            a[0] * (b[1] * c[2] - b[2] * c[1])
            - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0])
        )

    def point(self, code):
        """Exact 2D coordinates of a vertex (as Fractions)."""
        x, y, w = self._pt(code)
        return (Fraction(x, w), Fraction(y, w))

    # -- metered kernel ---------------------------------------------------

    def orient(self, a, b, c):
        m = METER
        if m.enabled:
            m.hold(9)
        r = self._orient_pts(self._pt(a), self._pt(b), self._pt(c))
        if m.enabled:
            m.release(9)
        return r

    def edges_cross(self, e1, e2):
        """True iff edges of different triangles cross at an interior point.

        Raises DegeneracyDetected when they touch or overlap otherwise.
        """
        m = METER
        if m.enabled:
            m.hold(24)
        try:
            l1, l2 = self._line[e1], self._line[e2]
            p1, p2 = self._pt(e1), self._pt(self.edge_corners(e1)[1])
            q1, q2 = self._pt(e2), self._pt(self.edge_corners(e2)[1])
            d1, d2 = _sign(_dot(l2, p1)), _sign(_dot(l2, p2))
            d3, d4 = _sign(_dot(l1, q1)), _sign(_dot(l1, q2))
            if d1 * d2 < 0 and d3 * d4 < 0:
                return True
            if d1 * d2 > 0 or d3 * d4 > 0:
                return False
            if d1 == d2 == 0:
                # collinear supporting lines; overlap is degenerate
                if self._collinear_overlap(e1, e2):
                    raise DegeneracyDetected(f"edges {e1} and {e2} overlap")
                return False
            raise DegeneracyDetected(f"edges {e1} and {e2} touch")
        finally:
            if m.enabled:
                m.release(24)

    def _collinear_overlap(self, e1, e2):
        d = self._dir[e1]
        proj = lambda p: Fraction(p[0] * d[0] + p[1] * d[1], p[2])
        a = sorted(proj(self._pt(c)) for c in self.edge_corners(e1))
        b = sorted(proj(self._pt(c)) for c in self.edge_corners(e2))
        return a[0] <= b[1] and b[0] <= a[1]

    def crossing_point(self, e1, e2):
        if not self.edges_cross(e1, e2):
            raise NoIntersection(f"edges {e1} and {e2} do not cross")
        return self.point(crossing_code(e1, e2, self.n))

    def along(self, e, p, q):
        """Sign of (position of q) - (position of p) along edge e, start to end."""
        m = METER
        if m.enabled:
            m.hold(8)
        a, b = self._pt(p), self._pt(q)
        dx, dy = self._dir[e]
        r = _sign((b[0] * dx + b[1] * dy) * a[2] - (a[0] * dx + a[1] * dy) * b[2])
        if m.enabled:
            m.release(8)
        return r

    def turn(self, e1, f1, e2, f2):
        """Orientation of direction (e2, f2) relative to (e1, f1).

        ``f`` is +1 for the edge's start->end direction and -1 otherwise.
        """
        a, b = self._dir[e1], self._dir[e2]
        return f1 * f2 * _sign(a[0] * b[1] - a[1] * b[0])

    def direction(self, e, forward):
        dx, dy = self._dir[e]
        return (dx, dy) if forward else (-dx, -dy)

    def in_triangle(self, code, t):
        """+1 strictly inside triangle t, 0 on its boundary, -1 outside."""
        m = METER
        if m.enabled:
            m.hold(6)
        p = self._pt(code)
        s = self.cw_sign[t]
        worst = 1
        for e in (3 * t, 3 * t + 1, 3 * t + 2):
            v = -s * _sign(_dot(self._line[e], p))
            if v < worst:
                worst = v
        if m.enabled:
            m.release(6)
        return worst

    def forward_outside(self, e_t, t, e_o, o):
        """At the crossing of e_t (of t) and e_o (of o): does the clockwise
        continuation along t leave triangle o?"""
        ft = self.cw_sign[t]
        fo = self.cw_sign[o]
        # interior of o is to the right of e_o in its clockwise direction
        return self.turn(e_o, fo, e_t, ft) > 0

    def ray_parity(self, u, v, frags):
        """Parity of upward-ray crossings from the midpoint of (u, v).

        ``frags`` holds ``(s, t, edge)`` boundary fragments; half-open
        x-rule, so vertices are counted once.
        """
        m = METER
        if m.enabled:
            m.hold(15)
        a, b = self._pt(u), self._pt(v)
        qx = a[0] * b[2] + b[0] * a[2]
        qy = a[1] * b[2] + b[1] * a[2]
        qw = 2 * a[2] * b[2]
        q = (qx, qy, qw)
        count = 0
        for s, t, e in frags:
            ps, pt = self._pt(s), self._pt(t)
            ls = _sign(ps[0] * qw - qx * ps[2])  # sign(xs - qx)
            lt = _sign(pt[0] * qw - qx * pt[2])
            if (ls <= 0 < lt) or (lt <= 0 < ls):
                if _dot(self._line[e], q) * _sign(self._dir[e][0]) < 0:
                    count += 1
        if m.enabled:
            m.release(15)
        return count & 1

    # -- depth (exact, used by validators and the oracle) ---------------

    def depth_at(self, t, a, b):
        """Ray parameter where the ray through plane point (a, b) meets
        triangle t's supporting plane; smaller is nearer."""
        A, B, C = self.triangles[t]
        normal = _cross(_sub(B, A), _sub(C, A))
        q = self.plane.lift(a, b)
        den = _dot(normal, _sub(q, self.viewpoint))
        if den == 0:
            raise DegeneracyDetected(f"triangle {t} is seen edge-on")
        return _dot(normal, _sub(A, self.viewpoint)) / den

    def back_project(self, t, a, b):
        s = self.depth_at(t, a, b)
        q = self.plane.lift(a, b)
        v = self.viewpoint
        return tuple(v[k] + s * (q[k] - v[k]) for k in range(3))

    # -- misc ----------------------------------------------------------------

    def with_triangles(self, triangles, n_padding=None):
        return Scene(
            self.viewpoint,
            triangles,
            plane=self.plane,
            n_padding=self.n_padding if n_padding is None else n_padding,
        )

    def __eq__(self, other):
        return (
            isinstance(other, Scene)
            and self.viewpoint == other.viewpoint
            and self.triangles == other.triangles
            and self.n_padding == other.n_padding
        )

    def __repr__(self):
        return f"Scene(n={self.n}, padding={self.n_padding})"


def project(scene, point3d):
    p = tuple(to_fraction(c) for c in point3d)
    return scene.plane.project(scene.viewpoint, p)


def resolve_vertex(scene, ref):
    """2D coordinates of a corner or crossing ref."""
    code = pack_ref(ref, scene.n)
    if code >= scene.n_edges:
        a, b = divmod(code - scene.n_edges, scene.n_edges)
        if a // 3 == b // 3 or not scene.edges_cross(a, b):
            raise NoIntersection(f"edges {a} and {b} do not cross")
    return scene.point(code)


# --------------------------------------------------------------------------
# candidate pairs


def overlapping_pairs(first, second=None):
    """Pairs of closed integer intervals that overlap.

    ``first``/``second`` are lists of ``(lo, hi, payload)``.  With one
    list, unordered pairs within it are reported; with two, cross pairs
    ``(payload_first, payload_second)``.
    """
    events = [(lo, 0, hi, p) for lo, hi, p in first]
    if second is None:
        events.sort(key=lambda ev: ev[0])
        active = []
        for lo, _, hi, p in events:
            active = [a for a in active if a[0] >= lo]
            for _, q in active:
                yield q, p
            active.append((hi, p))
        return
    events += [(lo, 1, hi, p) for lo, hi, p in second]
    events.sort(key=lambda ev: (ev[0], ev[1]))
    act = ([], [])
    for lo, side, hi, p in events:
        other = act[1 - side]
        if other and min(other)[0] < lo:
            other[:] = [a for a in other if a[0] >= lo]
        for _, q in other:
            yield (p, q) if side == 0 else (q, p)
        act[side].append((hi, p))


# --------------------------------------------------------------------------
# validation


def check_general_position(scene):
    """Raise DegeneracyDetected if projected edges touch, overlap or if
    three edges pass through one crossing."""
    items = []
    for e in range(scene.n_edges):
        xlo, xhi, _, _ = scene.edge_box(e)
        items.append((xlo, xhi, e))
    on_edge = {}
    for e1, e2 in overlapping_pairs(items):
        if e1 // 3 == e2 // 3:
            continue
        b1, b2 = scene.edge_box(e1), scene.edge_box(e2)
        if b1[3] < b2[2] or b2[3] < b1[2]:
            continue
        if scene.edges_cross(e1, e2):
            x = crossing_code(e1, e2, scene.n)
            on_edge.setdefault(e1, []).append(x)
            on_edge.setdefault(e2, []).append(x)
    for e, pts in on_edge.items():
        pts.sort(key=functools.cmp_to_key(lambda p, q: scene.along(e, q, p)))
        for p, q in zip(pts, pts[1:]):
            if scene.along(e, p, q) == 0:
                raise DegeneracyDetected(f"three edges meet on edge {e}")
    return True


def _clip(poly, a, b, keep_sign):
    """Clip a convex polygon (Fraction points) by the half-plane of a->b."""
    out = []
    side = lambda p: _sign((b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])) * keep_sign
    for i, p in enumerate(poly):
        q = poly[(i + 1) % len(poly)]
        sp, sq = side(p), side(q)
        if sp >= 0:
            out.append(p)
        if sp * sq < 0:
            dx, dy = q[0] - p[0], q[1] - p[1]
            ex, ey = b[0] - a[0], b[1] - a[1]
            s = (ex * (p[1] - a[1]) - ey * (p[0] - a[0])) / (ey * dx - ex * dy)
            out.append((p[0] + s * dx, p[1] + s * dy))
    return out


def triangle_overlap(scene, i, j):
    """Convex overlap polygon of the projections of triangles i and j."""
    poly = list(scene.projected[i])
    tri = scene.projected[j]
    keep = -scene.cw_sign[j]  # interior side of the clockwise edges
    for k in range(3):
        if not poly:
            break
        poly = _clip(poly, tri[k], tri[(k + 1) % 3], keep)
    return poly


def _area2(poly):
    return sum(
        p[0] * q[1] - q[0] * p[1] for p, q in zip(poly, poly[1:] + poly[:1])
    )


def occlusion_pairs(scene):
    """Yield ``(front, back, sample)`` for every pair of triangles whose
    projections overlap with positive area."""
    items = [(lo, hi, t) for t, (lo, hi, _, _) in ((t, scene.triangle_box(t)) for t in range(scene.n))]
    for i, j in overlapping_pairs(items):
        bi, bj = scene.triangle_box(i), scene.triangle_box(j)
        if bi[3] < bj[2] or bj[3] < bi[2]:
            continue
        poly = triangle_overlap(scene, i, j)
        if len(poly) < 3 or _area2(poly) == 0:
            continue
        cx = sum(p[0] for p in poly) / len(poly)
        cy = sum(p[1] for p in poly) / len(poly)
        di, dj = scene.depth_at(i, cx, cy), scene.depth_at(j, cx, cy)
        if di == dj:
            raise DegeneracyDetected(f"triangles {i} and {j} meet in 3D")
        yield ((i, j) if di < dj else (j, i)) + ((cx, cy),)


def depth_order_violations(scene):
    """All pairs ``(far_index, near_index)`` where the lower index occludes."""
    out = []
    for front, back, _ in occlusion_pairs(scene):
        if front < back:
            out.append((front, back))
    return sorted(out)


def validate_depth_order(scene):
    """Return True, or raise DepthOrderViolation naming the first bad pair."""
    bad = depth_order_violations(scene)
    if bad:
        raise DepthOrderViolation(*bad[0])
    return True


# --------------------------------------------------------------------------
# padding


def pad_to_power_of_two(scene):
    """Prepend hidden copies of the farthest triangle up to a power of 2.

    Copies are small homothets of triangle 0 inside its own plane, spread
    along its first median, then pushed away from the viewpoint so they
    lie strictly behind it.
    """
    n = scene.n
    target = 1 << (n - 1).bit_length()
    m = target - n
    if m == 0:
        return scene, 0
    A, B, C = scene.triangles[0]
    G = tuple((A[k] + B[k] + C[k]) / 3 for k in range(3))
    V = scene.viewpoint
    for attempt in range(16):
        scale = Fraction(1, 4 * (m + 2) + attempt)
        push = 1 + Fraction(1, 16 + attempt)
        pads = []
        for i in range(m):
            f = Fraction(9 * (i + 1), 10 * (m + 1))
            centre = tuple(G[k] + f * (A[k] - G[k]) for k in range(3))
            tri = []
            for X in (A, B, C):
                p = tuple(centre[k] + scale * (X[k] - G[k]) for k in range(3))
                tri.append(tuple(V[k] + push * (p[k] - V[k]) for k in range(3)))
            pads.append(tuple(tri))
        padded = scene.with_triangles(pads + list(scene.triangles), n_padding=scene.n_padding + m)
        try:
            check_general_position(padded)
        except DegeneracyDetected:
            continue
        return padded, m
    raise DegeneracyDetected("could not place padding triangles in general position")


# --------------------------------------------------------------------------
# scene files


def _fmt(x):
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    d = x.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d == 1:
        digits = max(twos, fives)
        s = x.numerator * 10**digits // x.denominator
        sign = "-" if s < 0 else ""
        s = str(abs(s)).rjust(digits + 1, "0")
        return f"{sign}{s[:-digits]}.{s[-digits:]}"
    return f"{x.numerator}/{x.denominator}"


def scene_to_json(scene):
    doc = {
        "viewpoint": [_fmt(c) for c in scene.viewpoint],
        "triangles": [[_fmt(c) for p in tri for c in p] for tri in scene.triangles],
    }
    if scene.n_padding:
        doc["padding"] = scene.n_padding
    return doc


def scene_from_json(doc):
    try:
        vp = doc["viewpoint"]
        tris = []
        for flat in doc["triangles"]:
            if len(flat) != 9:
                raise SceneFormatError("a triangle needs 9 coordinates")
            tris.append((tuple(flat[0:3]), tuple(flat[3:6]), tuple(flat[6:9])))
    except (KeyError, TypeError) as exc:
        raise SceneFormatError(f"malformed scene: {exc}") from exc
    return Scene(vp, tris, n_padding=int(doc.get("padding", 0)))


def load_scene(path):
    with open(path) as fh:
        try:
            doc = json.load(fh, parse_float=Fraction, parse_int=Fraction)
        except json.JSONDecodeError as exc:
            raise SceneFormatError(str(exc)) from exc
    return scene_from_json(doc)


def save_scene(scene, path):
    with open(path, "w") as fh:
        json.dump(scene_to_json(scene), fh, indent=1, sort_keys=True)
        fh.write("\n")
