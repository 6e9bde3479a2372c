"""Command-line entry point: ``hsr gen|viewshed|oracle|verify|stats``."""

import argparse
import os
import sys
from xml.sax.saxutils import quoteattr

from .errors import HSRError
from .gen import FAMILIES
from .geometry import load_scene, pad_to_power_of_two, save_scene
from .oracle import naive_union, trivial_viewshed
from .overlay import same_region
from .pipeline import prepare_scene, viewshed
from .vismap import dumps_canonical

SVG_SIZE = 1000
SVG_MARGIN = 0.05


def _seed(value):
    env = os.environ.get("HSR_SEED")
    return int(env) if env is not None else value


def _emit(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


# --------------------------------------------------------------------------
# svg


def render_svg(vmap, outline):
    """SVG of the root union outline and each visible polygon (even-odd fill)."""
    scene = vmap.scene
    pts = [scene.point(c) for c in range(scene.n_edges)]
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0) or 1
    inner = SVG_SIZE * (1 - 2 * SVG_MARGIN)
    off = SVG_SIZE * SVG_MARGIN

    def xy(code):
        x, y = scene.point(code)
        return f"{float(off + (x - x0) / span * inner):.3f},{float(off + (y1 - y) / span * inner):.3f}"

    def path(cycles):
        return " ".join("M" + " L".join(xy(v) for v in cyc) + " Z" for cyc in cycles)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}" '
        f'width="{SVG_SIZE}" height="{SVG_SIZE}">'
    ]
    for tid, polys in sorted(vmap.entries.items()):
        hue = (tid * 137) % 360
        for p in polys:
            d = path([p.outer, *p.holes])
            out.append(
                f'<path class="visible" data-id="{tid}" fill="hsl({hue},60%,65%)" '
                f'fill-rule="evenodd" stroke="none" d={quoteattr(d)}/>'
            )
    out.append(
        f'<path class="outline" fill="none" stroke="black" stroke-width="1.5" d={quoteattr(path(outline.cycles))}/>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# commands


def cmd_gen(args):
    make = FAMILIES[args.family]
    scene = make(args.n, _seed(args.seed))
    save_scene(scene, args.out)
    padded, _ = pad_to_power_of_two(scene)
    print(padded.n)
    return 0


def cmd_viewshed(args):
    scene = prepare_scene(load_scene(args.scene))
    vmap, tree = viewshed(scene)
    _emit(vmap.dumps(exact=args.exact), args.out)
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(render_svg(vmap, tree.union(tree.levels, 0)))
    return 0


def cmd_oracle(args):
    scene = prepare_scene(load_scene(args.scene), validate=False)
    vmap, crossings = trivial_viewshed(scene)
    _emit(vmap.dumps(exact=args.exact), args.out)
    print(f"crossings {crossings}", file=sys.stderr)
    return 0


def verify_scene(scene):
    """Run both algorithms plus the per-node union sweep; returns a report dict."""
    scene = prepare_scene(scene)
    vmap, tree = viewshed(scene)
    ref, _ = trivial_viewshed(scene)
    bad_nodes = []
    for level, index in tree.internal_nodes():
        expect = naive_union(scene, tree.subtree(level, index))
        if not same_region(tree.union(level, index), expect, scene):
            bad_nodes.append([level, index])
    diff = None if vmap == ref else vmap.diff(ref)
    return {"equal": diff is None, "diff": diff, "bad_nodes": bad_nodes}


def cmd_verify(args):
    report = verify_scene(load_scene(args.scene))
    if report["equal"]:
        print("EQUAL")
    else:
        print("DIFF " + dumps_canonical(report["diff"]).strip())
    if report["bad_nodes"]:
        print(f"union sweep: {len(report['bad_nodes'])} mismatching nodes {report['bad_nodes']}")
    else:
        print("union sweep: clean")
    return 0 if report["equal"] and not report["bad_nodes"] else 3


def cmd_stats(args):
    scene = prepare_scene(load_scene(args.scene))
    _, tree = viewshed(scene, record=args.dump)
    _emit(dumps_canonical(tree.stats.to_json()), args.out)
    if args.dump:
        print(tree.dump(), file=sys.stderr)
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="hsr", description="Viewshed of a triangle scene.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a scene")
    g.add_argument("family", choices=sorted(FAMILIES))
    g.add_argument("n", type=int)
    g.add_argument("seed", type=int, nargs="?", default=0)
    g.add_argument("-o", "--out", required=True)
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("viewshed", help="visibility map via the union tree")
    v.add_argument("scene")
    v.add_argument("-o", "--out")
    v.add_argument("--svg")
    v.add_argument("--exact", action="store_true", help="emit exact rationals")
    v.set_defaults(func=cmd_viewshed)

    o = sub.add_parser("oracle", help="visibility map by brute force")
    o.add_argument("scene")
    o.add_argument("-o", "--out")
    o.add_argument("--exact", action="store_true")
    o.set_defaults(func=cmd_oracle)

    c = sub.add_parser("verify", help="compare both algorithms on a scene")
    c.add_argument("scene")
    c.set_defaults(func=cmd_verify)

    s = sub.add_parser("stats", help="space instrumentation")
    s.add_argument("scene")
    s.add_argument("-o", "--out")
    s.add_argument("--dump", action="store_true", help="print the level tables to stderr")
    s.set_defaults(func=cmd_stats)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except HSRError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
