"""Union tree construction (bottom-up) and visibility extraction (top-down)."""

import math
from dataclasses import dataclass, field

import numpy as np

from .bits import RankSelectBitVector
from .catalog import (
    LevelMask,
    NodeMask,
    Walker,
    dump_level,
    grow_level,
    init_leaf_level,
    mark_union_boundary,
    remap_starts,
    vertex_numbering,
)
from .geometry import (
    METER,
    check_general_position,
    pad_to_power_of_two,
    ref_edges,
    validate_depth_order,
)
from .overlay import Region, boundary_crossings, overlay, region_union
from .vismap import VisibilityMap, assemble_polygons


@dataclass
class SpaceStats:
    n: int
    U_root_complexity: int = 0
    K_with_leaves: int = 0
    K_without_leaves: int = 0
    catalog_bits: int = 0
    mask_bits: int = 0
    overflow_refs: int = 0
    real_cells_peak: int = 0
    live_regions_peak: int = 0
    per_level_complexities: list = field(default_factory=list)

    @property
    def levels(self):
        return len(self.per_level_complexities)

    @property
    def fitted_c(self):
        denom = (self.U_root_complexity + self.K_with_leaves) * max(1.0, math.log2(self.n))
        return (self.catalog_bits + self.mask_bits) / denom if denom else 0.0

    def to_json(self):
        doc = {k: v for k, v in self.__dict__.items()}
        doc["fitted_c"] = self.fitted_c
        return doc


class UnionTree:
    """Complete binary tree over the (padded) triangles, nearest rightmost.

    Node ``(j, w)`` at level ``j`` (leaves are level 1) covers triangles
    ``[w * 2**(j-1), (w+1) * 2**(j-1))``.
    """

    def __init__(self, scene, catalog, masks, nodes, stats, history=None):
        self.scene = scene
        self.catalog = catalog
        self.masks = masks
        self.nodes = nodes
        self.stats = stats
        self.history = history or []
        self._walker = Walker(catalog, scene)

    @property
    def levels(self):
        return len(self.masks)

    @property
    def root(self):
        return self.nodes[(self.levels, 0)]

    def node(self, level, index):
        return self.nodes[(level, index)]

    def internal_nodes(self):
        return [key for key in sorted(self.nodes) if key[0] > 1]

    def union(self, level, index, use_starts=True):
        """Reconstructed boundary of U_w as a Region of vertex refs."""
        node = self.nodes[(level, index)]
        mask = self.masks[level - 1]
        return Region(self._walker.reconstruct_refs(mask, node, use_starts))

    def subtree(self, level, index):
        size = 1 << (level - 1)
        return range(index * size, (index + 1) * size)

    def dump(self):
        """Table-style rendering of every recorded level."""
        if not self.history:
            return ""
        ids = vertex_numbering(self.history[-1][0])
        return "\n\n".join(dump_level(cat, masks, ids) for cat, masks in self.history)


def build_union_tree(scene, record=False):
    n = scene.n
    if n & (n - 1):
        raise ValueError("scene size must be a power of two; pad it first")
    levels = n.bit_length()
    stats = SpaceStats(n=n - scene.n_padding)
    catalog, mask, leaves = init_leaf_level(scene)
    masks = [mask]
    nodes = {(1, t): leaf for t, leaf in enumerate(leaves)}
    stats.per_level_complexities.append(3 * n)
    catalog_peak = catalog.bits
    history = [(catalog, list(masks))] if record else []

    for j in range(2, levels + 1):
        walker = Walker(catalog, scene)
        prev = masks[-1]
        unions = []
        new = []
        for w in range(n >> (j - 1)):
            ua = Region(walker.reconstruct_refs(prev, nodes[(j - 1, 2 * w)]))
            ub = Region(walker.reconstruct_refs(prev, nodes[(j - 1, 2 * w + 1)]))
            found = boundary_crossings(ua, ub, scene)
            uw = region_union(ua, ub, found, scene)
            on = uw.vertices()
            for x in found:
                if x in on:
                    a, b = _crossing_triangles(x, n)
                    new += [(a, x), (b, x)]
            unions.append(uw)
        grown, masks, newpos = grow_level(catalog, masks, new, scene)
        catalog_peak = max(catalog_peak, catalog.bits + grown.bits)
        remap_starts(nodes.values(), newpos)
        catalog = grown
        claimed = np.zeros(len(catalog), dtype=bool)
        size = 1 << (j - 1)
        for w, uw in enumerate(unions):
            node = NodeMask(j, w, w * size, (w + 1) * size, RankSelectBitVector())
            nodes[(j, w)] = mark_union_boundary(catalog, claimed, node, uw.cycles, scene)
        masks.append(LevelMask(j, RankSelectBitVector(claimed)))
        stats.per_level_complexities.append(sum(len(u) for u in unions))
        if record:
            history.append((catalog, list(masks)))

    stats.K_with_leaves = sum(stats.per_level_complexities)
    stats.K_without_leaves = stats.K_with_leaves - 3 * n
    stats.U_root_complexity = stats.per_level_complexities[-1]
    stats.catalog_bits = max(catalog_peak, catalog.bits)
    stats.mask_bits = sum(m.bits.total_bits for m in masks) + sum(v.bits for v in nodes.values())
    return UnionTree(scene, catalog, masks, nodes, stats, history)


def _crossing_triangles(code, n):
    a, b = ref_edges(code, n)
    return a // 3, b // 3


@dataclass
class VisibilityRegion:
    """V_w held as catalog bits plus an overflow list of foreign vertices."""

    level: int
    index: int
    bits: RankSelectBitVector
    extra: list
    cycles: list

    @classmethod
    def encode(cls, level, index, region, catalog):
        flags = np.zeros(len(catalog), dtype=bool)
        extra = []
        for v in sorted(region.vertices()):
            occ = catalog.occurrences(v)
            if occ:
                flags[occ[0]] = True
            else:
                extra.append(v)
        return cls(level, index, RankSelectBitVector(flags), extra, region.cycles)

    @property
    def region(self):
        return Region(self.cycles)


def compute_visibility(tree, scene=None):
    """Top-down pass: V_r = V_w ∩ U_r (near child), V_f = V_w ∖ U_r (far child)."""
    scene = scene or tree.scene
    cat = tree.catalog
    top = tree.levels
    vmap = VisibilityMap(scene)
    stats = tree.stats
    live_extra = 0
    stack = [VisibilityRegion.encode(top, 0, tree.union(top, 0), cat)]
    live_extra += len(stack[0].extra)
    peak = 1
    peak_extra = live_extra
    while stack:
        v = stack.pop()
        if v.level == 1:
            live_extra -= len(v.extra)
            if v.index >= scene.n_padding:
                vmap.entries[v.index - scene.n_padding] = assemble_polygons(scene, v.cycles)
            continue
        j, w = v.level - 1, 2 * v.index
        if v.cycles:
            ur = tree.union(j, w + 1)
            res = overlay(v.region, ur, scene, ("intersection", "difference"))
            far, near = res["difference"], res["intersection"]
        else:
            far = near = Region()
        kids = [
            VisibilityRegion.encode(j, w, far, cat),
            VisibilityRegion.encode(j, w + 1, near, cat),
        ]
        # the parent is still alive while both children exist
        peak = max(peak, len(stack) + 1 + len(kids))
        live_extra += sum(len(k.extra) for k in kids) - len(v.extra)
        peak_extra = max(peak_extra, live_extra + len(v.extra))
        stack.extend(kids)
    stats.live_regions_peak = peak
    stats.overflow_refs = peak_extra
    return vmap


def viewshed(scene, record=False):
    """Full pipeline on a padded scene; returns (map, tree) with metered stats."""
    with METER:
        tree = build_union_tree(scene, record=record)
        vmap = compute_visibility(tree, scene)
        tree.stats.real_cells_peak = METER.peak
    return vmap, tree


def prepare_scene(scene, validate=True):
    """Check general position and depth order, then pad to a power of two."""
    if validate:
        check_general_position(scene)
        validate_depth_order(scene)
    padded, _ = pad_to_power_of_two(scene)
    return padded
