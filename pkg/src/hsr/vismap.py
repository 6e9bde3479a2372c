"""Visibility map: per input triangle, its visible polygons with holes."""

import json
from json.encoder import _make_iterencode
from dataclasses import dataclass, field
from fractions import Fraction

from .overlay import Location, Region, cycle_area2, normalize_cycle, point_in_region


@dataclass(frozen=True)
class Polygon:
    outer: tuple
    holes: tuple = ()

    @property
    def size(self):
        return len(self.outer) + sum(len(h) for h in self.holes)


def assemble_polygons(scene, cycles):
    """Group clockwise outer cycles with the counter-clockwise holes they contain."""
    outers, holes = [], []
    for c in cycles:
        a = cycle_area2(scene, c)
        (outers if a < 0 else holes).append((c, abs(a)))
    groups = {i: [] for i in range(len(outers))}
    for h, _ in holes:
        probe = scene.point(h[0])
        best = None
        for i, (o, area) in enumerate(outers):
            if point_in_region(Region([o]), probe, scene) is Location.INSIDE:
                if best is None or area < outers[best][1]:
                    best = i
        if best is None:
            raise ValueError("hole outside every outer boundary")
        groups[best].append(h)
    return [Polygon(o, tuple(groups[i])) for i, (o, _) in enumerate(outers)]


def _canonical_polygon(scene, poly):
    outer = normalize_cycle(scene, poly.outer)
    holes = sorted((normalize_cycle(scene, h) for h in poly.holes), key=lambda c: scene.point(c[0]))
    return Polygon(outer, tuple(holes))


@dataclass
class VisibilityMap:
    """Visible portions keyed by original triangle index (padding excluded)."""

    scene: object
    entries: dict = field(default_factory=dict)

    @property
    def k(self):
        return sum(p.size for polys in self.entries.values() for p in polys)

    def normalized(self):
        scene = self.scene
        out = {}
        for tid, polys in self.entries.items():
            canon = [_canonical_polygon(scene, p) for p in polys]
            canon.sort(key=lambda p: scene.point(p.outer[0]))
            out[tid] = canon
        return out

    def __eq__(self, other):
        if not isinstance(other, VisibilityMap):
            return NotImplemented
        return self.normalized() == other.normalized()

    def diff(self, other):
        """First differing triangle and the area discrepancy, or None."""
        a, b = self.normalized(), other.normalized()
        for tid in sorted(set(a) | set(b)):
            if a.get(tid, []) != b.get(tid, []):
                return {
                    "triangle": tid,
                    "area_left": str(self.area(tid)),
                    "area_right": str(other.area(tid)),
                }
        return None

    def area(self, tid):
        scene = self.scene
        total = Fraction(0)
        for p in self.entries.get(tid, []):
            total -= cycle_area2(scene, p.outer) / 2
            for h in p.holes:
                total -= cycle_area2(scene, h) / 2
        return total

    def total_area(self):
        return sum((self.area(t) for t in self.entries), Fraction(0))

    def coordinates(self, cycle, exact=False):
        pts = [self.scene.point(v) for v in cycle]
        if exact:
            return [[str(x), str(y)] for x, y in pts]
        return [[float(x), float(y)] for x, y in pts]

    def to_json(self, exact=False):
        tris = []
        canon = self.normalized()
        for tid in sorted(canon):
            vis = []
            for p in canon[tid]:
                vis.append(
                    {
                        "outer": self.coordinates(p.outer, exact),
                        "holes": [self.coordinates(h, exact) for h in p.holes],
                    }
                )
            tris.append({"id": tid, "visible": vis})
        return {"k": self.k, "triangles": tris}

    def dumps(self, exact=False):
        return dumps_canonical(self.to_json(exact))


def dumps_canonical(doc):
    """Deterministic JSON: sorted keys, floats with 17 significant digits."""
    text = _Encoder(sort_keys=True, indent=1).encode(doc)
    return text + "\n"


class _Encoder(json.JSONEncoder):
    def iterencode(self, o, _one_shot=False):
        def floatstr(v):
            if v != v or v in (float("inf"), float("-inf")):
                raise ValueError("non-finite float")
            return format(v, ".17g")

        markers = {} if self.check_circular else None
        gen = _make_iterencode(
            markers,
            self.default,
            json.encoder.encode_basestring_ascii,
            self.indent,
            floatstr,
            self.key_separator,
            self.item_separator,
            self.sort_keys,
            self.skipkeys,
            _one_shot,
        )
        return gen(o, 0)


def back_project_polygons(scene, tid, polygons):
    """Lift a triangle's visible polygons onto its supporting plane in 3D."""
    t = tid + scene.n_padding
    out = []
    for p in polygons:
        lift = lambda cyc: [scene.back_project(t, *scene.point(v)) for v in cyc]
        out.append({"outer": lift(p.outer), "holes": [lift(h) for h in p.holes]})
    return out
