"""Shared vertex catalog and bit-mask encoding of partial unions.

Level ``i`` keeps one array of vertex refs per triangle, concatenated
into a single catalog.  Every block starts at a corner and lists the
vertices met while walking the projected triangle clockwise.  Crossing
vertices occur in two blocks, joined by cross pointers.  A partial union
at level ``j`` is then nothing more than the set bits of the level mask
inside the blocks of its triangles, a bit per triangle saying whether it
contributes to the boundary, and one start position per boundary cycle.
"""

import functools
from dataclasses import dataclass, field

import numpy as np

from .bits import RankSelectBitVector, array_bits, packed_array
from .errors import (
    CyclicOrderViolation,
    DuplicateVertex,
    MaskConflict,
    NonClosingWalk,
    OrphanVertex,
    OutOfRange,
)
from .geometry import common_edge, ref_edges


class VertexCatalog:
    """Per-triangle clockwise vertex lists with cross pointers and prefix sums.

    Positions are 0-based.  ``cross[q] == q`` marks a corner (no partner).
    """

    def __init__(self, level, n, refs, cross, prefix):
        self.level = level
        self.n = n
        self.refs = refs
        self.cross = cross
        self.prefix = prefix

    def __len__(self):
        return int(self.refs.size)

    @property
    def counts(self):
        return np.diff(self.prefix.astype(np.int64))

    @property
    def bits(self):
        return array_bits(self.refs) + array_bits(self.cross) + array_bits(self.prefix)

    def block(self, t):
        return int(self.prefix[t]), int(self.prefix[t + 1])

    def abs_position(self, t, r):
        lo, hi = self.block(t)
        if not 0 <= r < hi - lo:
            raise OutOfRange((t, r))
        return lo + r

    def rel_position(self, q):
        if not 0 <= q < len(self):
            raise OutOfRange(q)
        t = int(np.searchsorted(self.prefix, q, side="right")) - 1
        return t, q - int(self.prefix[t])

    def triangle_of(self, q):
        return int(np.searchsorted(self.prefix, q, side="right")) - 1

    def ref(self, q):
        return int(self.refs[q])

    def partner(self, q):
        return int(self.cross[q])

    def is_crossing(self, q):
        return int(self.cross[q]) != q

    def block_refs(self, t):
        lo, hi = self.block(t)
        return self.refs[lo:hi].tolist()

    def find(self, ref, t):
        """Position of ``ref`` in the block of triangle t, or None."""
        lo, hi = self.block(t)
        hit = np.flatnonzero(self.refs[lo:hi] == ref)
        return lo + int(hit[0]) if hit.size else None

    def occurrences(self, ref):
        """All positions of a vertex (one for corners, two for crossings)."""
        out = []
        for e in ref_edges(ref, self.n):
            q = self.find(ref, e // 3)
            if q is not None and q not in out:
                out.append(q)
        return out


@dataclass
class LevelMask:
    level: int
    bits: RankSelectBitVector


@dataclass
class NodeMask:
    """Per-node data: contributing triangles and one start per cycle."""

    level: int
    index: int
    lo: int
    hi: int
    triangles: RankSelectBitVector
    starts: np.ndarray = field(default_factory=lambda: np.zeros(0, np.uint8))

    @property
    def bits(self):
        return self.triangles.total_bits + array_bits(self.starts)


# --------------------------------------------------------------------------
# level 1


def init_leaf_level(scene):
    refs = []
    for t in range(scene.n):
        refs.extend(start for start, _, _ in scene.cw_edges(t))
    size = len(refs)
    catalog = VertexCatalog(
        1,
        scene.n,
        packed_array(refs, max(refs)),
        packed_array(np.arange(size), size),
        packed_array(np.arange(0, size + 1, 3), size),
    )
    mask = LevelMask(1, RankSelectBitVector(np.ones(size, dtype=bool)))
    nodes = [
        NodeMask(1, t, t, t + 1, RankSelectBitVector([1]), packed_array([3 * t], size))
        for t in range(scene.n)
    ]
    return catalog, mask, nodes


# --------------------------------------------------------------------------
# growth


def _edge_of(ref, t, n):
    for e in ref_edges(ref, n):
        if e // 3 == t:
            return e
    raise DuplicateVertex(f"vertex {ref} is not on triangle {t}")


def grow_level(catalog, masks, new_vertices, scene):
    """Insert new vertices and remap every mask onto the grown catalog.

    ``new_vertices`` lists ``(triangle, ref)``; each new crossing must
    appear once for each of its two triangles.  Returns
    ``(catalog, masks, newpos)`` where ``newpos[q]`` is the new position
    of old position ``q``.
    """
    n = scene.n
    per_tri = {}
    for t, ref in new_vertices:
        per_tri.setdefault(t, []).append(ref)

    old_refs = catalog.refs.tolist()
    refs = []
    newpos = np.empty(len(old_refs), dtype=np.int64)
    prefix = [0]
    for t in range(n):
        lo, hi = catalog.block(t)
        block = old_refs[lo:hi]
        extra = per_tri.get(t)
        if not extra:
            newpos[lo:hi] = np.arange(len(refs), len(refs) + hi - lo)
            refs.extend(block)
            prefix.append(len(refs))
            continue
        if len(set(extra)) != len(extra) or set(extra) & set(block):
            raise DuplicateVertex(f"duplicate vertex inserted into triangle {t}")
        by_edge = {}
        for ref in extra:
            by_edge.setdefault(_edge_of(ref, t, n), []).append(ref)
        corners = {start for start, _, _ in scene.cw_edges(t)}
        k = 0
        for start, e, forward in scene.cw_edges(t):
            sgn = 1 if forward else -1
            assert block[k] == start
            newpos[lo + k] = len(refs)
            refs.append(start)
            k += 1
            old_run = []
            while k < len(block) and block[k] not in corners:
                old_run.append(lo + k)
                k += 1
            new_run = sorted(
                by_edge.get(e, ()),
                key=functools.cmp_to_key(lambda p, q: scene.along(e, q, p) * sgn),
            )
            for p, q in zip(new_run, new_run[1:]):
                if scene.along(e, p, q) == 0:
                    raise CyclicOrderViolation(f"vertices {p} and {q} coincide on edge {e}")
            i = 0
            for pos in old_run:
                old = old_refs[pos]
                while i < len(new_run):
                    c = scene.along(e, old, new_run[i]) * sgn
                    if c == 0:
                        raise CyclicOrderViolation(f"vertex {new_run[i]} collides with {old}")
                    if c > 0:
                        break
                    refs.append(new_run[i])
                    i += 1
                newpos[pos] = len(refs)
                refs.append(old)
            refs.extend(new_run[i:])
        prefix.append(len(refs))

    size = len(refs)
    cross = np.empty(size, dtype=np.int64)
    filled = np.zeros(size, dtype=bool)
    old_cross = catalog.cross.astype(np.int64)
    cross[newpos] = newpos[old_cross]
    filled[newpos] = True
    pending = {}
    for q in np.flatnonzero(~filled).tolist():
        pending.setdefault(refs[q], []).append(q)
    for ref, qs in pending.items():
        if len(qs) != 2:
            raise DuplicateVertex(f"crossing {ref} supplied {len(qs)} times")
        cross[qs[0]], cross[qs[1]] = qs[1], qs[0]

    grown = VertexCatalog(
        catalog.level + 1,
        n,
        packed_array(refs),
        packed_array(cross, size),
        packed_array(prefix, size),
    )
    remapped = []
    for m in masks:
        arr = np.zeros(size, dtype=bool)
        arr[newpos[m.bits.to_array()]] = True
        remapped.append(LevelMask(m.level, RankSelectBitVector(arr)))
    return grown, remapped, newpos


def remap_starts(nodes, newpos):
    size = int(newpos.max()) + 1 if newpos.size else 1
    for node in nodes:
        if node.starts.size:
            node.starts = packed_array(newpos[node.starts.astype(np.int64)], size)


# --------------------------------------------------------------------------
# marking


def outgoing_triangle(u, v, n):
    """Triangle carrying the boundary fragment from u to v."""
    return common_edge(u, v, n) // 3


def mark_union_boundary(catalog, claimed, node, cycles, scene):
    """Record one partial union in the level bitmap ``claimed``.

    ``claimed`` is a boolean array over catalog positions shared by all
    nodes of the level; ``node`` receives its triangle bits and start
    positions.
    """
    n = scene.n
    contributing = np.zeros(node.hi - node.lo, dtype=bool)
    starts = []
    for cyc in cycles:
        k = len(cyc)
        for i, v in enumerate(cyc):
            t_out = outgoing_triangle(v, cyc[(i + 1) % k], n)
            contributing[t_out - node.lo] = True
            occ = catalog.occurrences(v)
            if not occ:
                raise OrphanVertex(f"vertex {v} missing from the catalog")
            for q in occ:
                if claimed[q]:
                    raise MaskConflict(f"position {q} already claimed at level {node.level}")
                claimed[q] = True
            if i == 0:
                starts.append(catalog.find(v, t_out))
    node.triangles = RankSelectBitVector(contributing)
    node.starts = packed_array(starts, max(len(catalog), 1))
    return node


# --------------------------------------------------------------------------
# reconstruction


class Walker:
    """Reconstructs partial unions from the catalog and a level mask.

    Holds the white/black colour array over triangles; every call leaves
    it all-white again.
    """

    def __init__(self, catalog, scene):
        self.catalog = catalog
        self.scene = scene
        self.colors = bytearray(scene.n)

    def _walk(self, mask, start, counts, visited):
        cat = self.catalog
        cross = cat.cross
        cyc = [start]
        visited.add(start)
        t = cat.triangle_of(start)
        counts[t] = counts.get(t, 0) + 1
        cur = start
        lo, hi = cat.block(t)
        limit = 2 * len(cat) + 2
        for _ in range(limit):
            nxt = mask.next_one_cyclic(lo, hi - 1, cur)
            q = int(cross[nxt])
            if nxt == start:
                return cyc
            counts[t] = counts.get(t, 0) + 1
            visited.add(nxt)
            if q != nxt:
                if q == start:
                    return cyc
                t = cat.triangle_of(q)
                lo, hi = cat.block(t)
                counts[t] = counts.get(t, 0) + 1
                visited.add(q)
                cyc.append(q)
                cur = q
            else:
                cyc.append(nxt)
                cur = nxt
        raise NonClosingWalk(f"walk from position {start} does not close")

    def _fallback_start(self, mask, node, visited):
        cat = self.catalog
        scene = self.scene
        n = scene.n
        for k in range(1, node.triangles.ones + 1):
            t = node.lo + node.triangles.select(k) - 1
            if self.colors[t]:
                continue
            lo, hi = cat.block(t)
            first = mask.rank(lo)
            for r in range(first + 1, mask.rank(hi) + 1):
                q = mask.select(r) - 1
                if q in visited:
                    continue
                if not cat.is_crossing(q):
                    return q
                a, b = ref_edges(cat.ref(q), n)
                e_t, e_o = (a, b) if a // 3 == t else (b, a)
                if scene.forward_outside(e_t, t, e_o, e_o // 3):
                    return q
        return None

    def reconstruct(self, mask, node, use_starts=True):
        """Boundary cycles of a node's union as lists of catalog positions."""
        bits = mask.bits if isinstance(mask, LevelMask) else mask
        cat = self.catalog
        counts = {}
        visited = set()
        cycles = []
        touched = []
        try:
            if use_starts:
                for s in node.starts.tolist():
                    cycles.append(self._walk(bits, s, counts, visited))
                self._blacken(bits, counts, touched)
            else:
                while True:
                    self._blacken(bits, counts, touched)
                    s = self._fallback_start(bits, node, visited)
                    if s is None:
                        break
                    cycles.append(self._walk(bits, s, counts, visited))
            for k in range(1, node.triangles.ones + 1):
                t = node.lo + node.triangles.select(k) - 1
                if not self.colors[t]:
                    raise OrphanVertex(f"triangle {t} keeps unvisited boundary vertices")
            if len(touched) != node.triangles.ones:
                raise OrphanVertex("walk touched triangles outside the node mask")
        finally:
            for t in touched:
                self.colors[t] = 0
        return cycles

    def _blacken(self, bits, counts, touched):
        cat = self.catalog
        for t, c in counts.items():
            if self.colors[t]:
                continue
            lo, hi = cat.block(t)
            if c == bits.count_range(lo, hi):
                self.colors[t] = 1
                touched.append(t)

    def reconstruct_refs(self, mask, node, use_starts=True):
        cat = self.catalog
        return [tuple(cat.ref(q) for q in cyc) for cyc in self.reconstruct(mask, node, use_starts)]


def reconstruct_union(catalog, mask, node, scene, use_starts=True):
    return Walker(catalog, scene).reconstruct(mask, node, use_starts)


# --------------------------------------------------------------------------
# debug dump


def vertex_numbering(catalog):
    """Stable 1-based vertex ids by first appearance in the catalog."""
    ids = {}
    for ref in catalog.refs.tolist():
        if ref not in ids:
            ids[ref] = len(ids) + 1
    return ids


def dump_level(catalog, masks, ids):
    """Render C_i and its masks with '|' between triangle blocks."""
    width = max(2, len(str(len(ids))))
    refs = catalog.refs.tolist()
    blocks = [range(*catalog.block(t)) for t in range(catalog.n)]

    def row(values):
        return "|".join(",".join(str(values[q]).rjust(width) for q in b) for b in blocks)

    i = catalog.level
    lines = [f"C_{i}: " + row([ids[r] for r in refs])]
    for m in masks:
        lines.append(f"B_{i},{m.level}: " + row(m.bits.to_array().astype(int).tolist()))
    return "\n".join(lines)
